#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "fujita/fft.hpp"
#include "fujita/grid.hpp"

namespace fujita {

using cplx = std::complex<double>;

/// Real scalar field sampled on a periodic grid, with an optional cached
/// spectrum (unnormalized forward DFT of the samples). Fields are immutable
/// after construction and safe to share across threads.
class Field {
 public:
  Field() = default;

  static Field zeros(const Grid& g) {
    return Field(g, std::vector<double>(g.size(), 0.0));
  }

  static Field constant(const Grid& g, double value) {
    return Field(g, std::vector<double>(g.size(), value));
  }

  static Field from_samples(const Grid& g, std::vector<double> samples) {
    if (samples.size() != g.size())
      throw InvalidFieldError("Field: sample count does not match grid");
    return Field(g, std::move(samples));
  }

  /// Sample an analytic function of the point coordinates (length = dim).
  static Field from_function(const Grid& g,
                             const std::function<double(const std::array<double, 3>&)>& f) {
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto idx = g.unflatten(i);
      std::array<double, 3> x{0, 0, 0};
      for (int k = 0; k < g.dim; ++k) x[k] = g.coord(idx[k]);
      s[i] = f(x);
    }
    return Field(g, std::move(s));
  }

  /// Build a field from its spectrum (unnormalized forward-DFT coefficients).
  static Field from_spectrum(const Grid& g, std::vector<cplx> spec) {
    if (spec.size() != g.size())
      throw InvalidFieldError("Field: spectrum size does not match grid");
    auto samples = fft::inverse_to_real(spec, g.dim,
                                        static_cast<std::size_t>(g.n));
    Field f(g, std::move(samples));
    f.spectrum_ = std::move(spec);
    return f;
  }

  const Grid& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  bool all_finite() const {
    return std::all_of(samples_.begin(), samples_.end(),
                       [](double v) { return std::isfinite(v); });
  }

  /// Spectrum of the samples; uses the cache when present, otherwise computes
  /// a fresh copy (the field itself is not mutated).
  std::vector<cplx> spectrum() const {
    if (spectrum_) return *spectrum_;
    return fft::forward_real(samples_, grid_.dim,
                             static_cast<std::size_t>(grid_.n));
  }

  bool has_cached_spectrum() const { return spectrum_.has_value(); }

  double mean() const {
    double s = 0;
    for (double v : samples_) s += v;
    return s / static_cast<double>(samples_.size());
  }

  /// Grid quadrature of the field over the box (trapezoid = rectangle on a
  /// uniform periodic grid).
  double mass() const { return mean() * std::pow(grid_.box_length, grid_.dim); }

  double linf_norm() const {
    double m = 0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Grid L^q norm; q = infinity handled by linf_norm.
  double lp_norm(double q) const {
    if (!std::isfinite(q)) return linf_norm();
    if (q < 1.0) throw DomainError("Field::lp_norm: q must be >= 1");
    double s = 0;
    for (double v : samples_) s += std::pow(std::abs(v), q);
    return std::pow(grid_.cell_volume() * s, 1.0 / q);
  }

  double l1_norm() const {
    double s = 0;
    for (double v : samples_) s += std::abs(v);
    return grid_.cell_volume() * s;
  }

  double l2_norm() const {
    double s = 0;
    for (double v : samples_) s += v * v;
    return std::sqrt(grid_.cell_volume() * s);
  }

  /// Fraction of spectral energy carried by modes with any axis frequency in
  /// the top third of the resolved band. Used as an aliasing/resolution guard.
  double spectral_tail_fraction() const {
    const auto spec = spectrum();
    const int n = grid_.n;
    const int cutoff = n / 3;  // |k| >= n/2 - n/6 = n/3 region boundary
    double tail = 0, total = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double e = std::norm(spec[i]);
      total += e;
      std::size_t rest = i;
      bool in_tail = false;
      for (int k = 0; k < grid_.dim; ++k) {
        const int j = static_cast<int>(rest % static_cast<std::size_t>(n));
        rest /= static_cast<std::size_t>(n);
        if (std::abs(grid_.freq_index(j)) >= cutoff) in_tail = true;
      }
      if (in_tail) tail += e;
    }
    return total > 0 ? tail / total : 0.0;
  }

 private:
  Field(Grid g, std::vector<double> samples)
      : grid_(g), samples_(std::move(samples)) {}

  Grid grid_;
  std::vector<double> samples_;
  std::optional<std::vector<cplx>> spectrum_;
};

/// Pointwise linear combination a*u + b*v on a shared grid.
inline Field axpy(double a, const Field& u, double b, const Field& v) {
  if (!(u.grid() == v.grid()))
    throw InvalidFieldError("axpy: fields live on different grids");
  std::vector<double> s(u.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a * u[i] + b * v[i];
  return Field::from_samples(u.grid(), std::move(s));
}

/// Sup-norm distance between two fields on the same grid.
inline Field scale(const Field& u, double a) {
  std::vector<double> s(u.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a * u[i];
  return Field::from_samples(u.grid(), std::move(s));
}

inline double sup_distance(const Field& u, const Field& v) {
  if (!(u.grid() == v.grid()))
    throw InvalidFieldError("sup_distance: fields live on different grids");
  double m = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

}  // namespace fujita
