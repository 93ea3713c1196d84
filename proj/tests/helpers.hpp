#pragma once

#include <cmath>
#include <random>

#include "fujita/fujita.hpp"

// Shared fixtures and independent oracles for the test suites. Oracles here
// must not reuse the spectral implementation paths they check.

namespace testing_support {

using namespace fujita;

inline Field gaussian_1d(const Grid& g, double amp, double center, double width) {
  return Field::from_function(g, [=](const std::array<double, 3>& x) {
    const double d = x[0] - center;
    return amp * std::exp(-d * d / (2.0 * width * width));
  });
}

/// Closed-form heat kernel of -d^2/dx^2 at time t, periodized over the box.
inline double heat_kernel_exact_periodized(double x, double t, double L) {
  double s = 0;
  for (int m = -4; m <= 4; ++m) {
    const double z = x + m * L;
    s += std::exp(-z * z / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
  }
  return s;
}

/// Closed-form Poisson kernel (free space) t/pi / (t^2 + x^2).
inline double poisson_kernel_free(double x, double t) {
  return (t / kPi) / (t * t + x * x);
}

/// Periodized Poisson kernel via the closed Abel sum of its Fourier series:
/// (1/L) sinh(2 pi t / L) / (cosh(2 pi t / L) - cos(2 pi x / L)).
inline double poisson_kernel_periodized(double x, double t, double L) {
  const double a = kTwoPi * t / L;
  const double th = kTwoPi * x / L;
  return (1.0 / L) * std::sinh(a) / (std::cosh(a) - std::cos(th));
}

/// Free-space Poisson kernel by direct quadrature of the inverse Fourier
/// integral (1/pi) int_0^inf e^{-t xi} cos(xi x) d xi (Simpson rule).
inline double poisson_kernel_quadrature(double x, double t) {
  const double xi_max = 60.0 / t;
  const int n = 200000;
  const double h = xi_max / n;
  double s = std::cos(0.0) + std::exp(-t * xi_max) * std::cos(xi_max * x);
  for (int i = 1; i < n; ++i) {
    const double xi = i * h;
    s += std::exp(-t * xi) * std::cos(xi * x) * (i % 2 ? 4.0 : 2.0);
  }
  return s * h / (3.0 * kPi);
}

/// Second-derivative finite-difference stencil (periodic).
inline double second_difference(const Field& u, int i) {
  const int n = u.grid().n;
  const double h = u.grid().spacing();
  auto at = [&](int j) { return u[static_cast<std::size_t>(((j % n) + n) % n)]; };
  return (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (h * h);
}

inline std::mt19937_64 rng(std::uint64_t seed = 987654321ull) {
  return std::mt19937_64(seed);
}

}  // namespace testing_support
