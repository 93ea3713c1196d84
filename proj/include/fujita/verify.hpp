#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fujita/estimates.hpp"
#include "fujita/field.hpp"
#include "fujita/operator_core.hpp"

// Seed-fixed randomized verification suite for the inequalities the
// contraction and capacity arguments rely on. Every check reports its worst
// normalized violation; the suite passes when all stay within tolerance.

namespace fujita {

struct VerifyCheck {
  std::string name;
  int cases = 0;
  double worst = 0;      // worst normalized violation observed
  double tolerance = 0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_passed = true;
};

namespace detail {

/// Random band-limited field: a handful of Gaussian bumps with bounded width,
/// resolved on the grid.
inline Field random_smooth_field(std::mt19937_64& rng, const Grid& g,
                                 bool nonnegative) {
  std::uniform_int_distribution<int> nbumps(3, 7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int m = nbumps(rng);
  struct Bump {
    double c[3], w, a;
  };
  std::vector<Bump> bumps(static_cast<std::size_t>(m));
  for (auto& bp : bumps) {
    for (int k = 0; k < 3; ++k)
      bp.c[k] = (unit(rng) - 0.5) * 0.5 * g.box_length;
    bp.w = (0.02 + 0.06 * unit(rng)) * g.box_length;
    bp.a = nonnegative ? 0.2 + unit(rng) : 2.0 * unit(rng) - 1.0;
  }
  return Field::from_function(g, [&](const std::array<double, 3>& x) {
    double v = 0;
    for (const auto& bp : bumps) {
      double r2 = 0;
      for (int k = 0; k < g.dim; ++k) {
        // nearest periodic image
        double dxk = x[k] - bp.c[k];
        if (dxk > 0.5 * g.box_length) dxk -= g.box_length;
        if (dxk < -0.5 * g.box_length) dxk += g.box_length;
        r2 += dxk * dxk;
      }
      v += bp.a * std::exp(-r2 / (2.0 * bp.w * bp.w));
    }
    return v;
  });
}

}  // namespace detail

/// Contractivity of the semigroup with constant 1: ||e^{-tL}u||_q <=
/// (1 + 1e-6) ||u||_q for q in {1, 2, inf}.
inline VerifyCheck verify_contractivity(std::mt19937_64& rng, int cases) {
  VerifyCheck chk{"semigroup contractivity (C = 1)", cases, 0.0, 1e-6, false};
  const Grid g = Grid::make(1, 256, 64.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 0; c < cases; ++c) {
    const Field u = detail::random_smooth_field(rng, g, false);
    const double a = unit(rng) * 2.0;
    double b = unit(rng) * 2.0;
    if (a + b == 0.0) b = 1.0;
    const auto params = OperatorParams::make(a, b, 0.1 + 0.8 * unit(rng));
    const double t = std::pow(10.0, -3.0 + 4.0 * unit(rng));
    const Field ut = apply_semigroup(u, params, t);
    for (double q : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      const double nu = std::isfinite(q) ? u.lp_norm(q) : u.linf_norm();
      const double nt = std::isfinite(q) ? ut.lp_norm(q) : ut.linf_norm();
      if (nu > 0) chk.worst = std::max(chk.worst, nt / nu - 1.0);
    }
  }
  chk.passed = chk.worst <= chk.tolerance;
  return chk;
}

/// Convexity inequality for powered nonnegative fields:
/// (-Lap)^s[b^l] <= l b^{l-1} (-Lap)^s[b], normalized by max |(-Lap)^s b^l|.
inline VerifyCheck verify_cordoba(std::mt19937_64& rng, int cases) {
  VerifyCheck chk{"Cordoba-Cordoba convexity", cases, 0.0, 1e-6, false};
  const Grid g = Grid::make(1, 256, 64.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 0; c < cases; ++c) {
    const Field base = detail::random_smooth_field(rng, g, true);
    const double s = 0.15 + 0.7 * unit(rng);
    const double l = 1.25 + 4.75 * unit(rng);
    const double violation = cordoba_check(base, s, l);
    std::vector<double> powl(base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
      powl[i] = std::pow(std::max(base[i], 0.0), l);
    const double scale =
        detail::frac_laplacian(Field::from_samples(g, std::move(powl)), s)
            .linf_norm();
    if (scale > 0) chk.worst = std::max(chk.worst, violation / scale);
  }
  chk.passed = chk.worst <= chk.tolerance;
  return chk;
}

/// Difference-of-powers bound with constant C(p) = p.
inline VerifyCheck verify_power_difference(std::mt19937_64& rng, int cases) {
  VerifyCheck chk{"| |u|^p - |v|^p | <= p |u-v| (|u|^{p-1} + |v|^{p-1})", cases,
                  0.0, 1e-12, false};
  const Grid g = Grid::make(1, 256, 64.0);
  const double ps[3] = {1.5, 2.0, 3.0};
  for (int c = 0; c < cases; ++c) {
    const Field u = detail::random_smooth_field(rng, g, false);
    const Field v = detail::random_smooth_field(rng, g, false);
    const double p = ps[c % 3];
    const auto rep = pointwise_inequality_suite(u, v, p);
    const double scale = std::max(
        {std::pow(u.linf_norm(), p), std::pow(v.linf_norm(), p), 1e-300});
    chk.worst = std::max(
        {chk.worst, rep.qwe_violation / scale, rep.product_violation_l1 / scale,
         rep.product_violation_l2 / scale});
  }
  chk.passed = chk.worst <= chk.tolerance;
  return chk;
}

/// Weighted epsilon-Young inequality with the sharp constant
/// C(eps) = (eps p)^{-1/(p-1)} (p-1)/p.
inline VerifyCheck verify_young(std::mt19937_64& rng, int cases) {
  VerifyCheck chk{"epsilon-Young with sharp C(eps)", cases, 0.0, 1e-12, false};
  const Grid g = Grid::make(1, 256, 64.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 0; c < cases; ++c) {
    const Field fa = detail::random_smooth_field(rng, g, false);
    const Field fb = detail::random_smooth_field(rng, g, false);
    const double p = 1.2 + 2.8 * unit(rng);
    const double w = 0.1 + 4.0 * unit(rng);
    const double eps = (c % 2) ? 0.1 : 0.25;
    const double ce = young_constant(eps, p);
    for (std::size_t i = 0; i < fa.size(); ++i) {
      const double A = std::abs(fa[i]);
      const double B = std::abs(fb[i]);
      const double lhs = A * B;
      const double rhs = eps * std::pow(A, p) * w +
                         ce * std::pow(B, p / (p - 1.0)) * std::pow(w, -1.0 / (p - 1.0));
      const double scale = std::max(rhs, 1e-300);
      chk.worst = std::max(chk.worst, (lhs - rhs) / scale);
    }
  }
  chk.passed = chk.worst <= chk.tolerance;
  return chk;
}

inline VerifyReport run_verification_suite(std::uint64_t seed = 12345,
                                           int cases = 100) {
  std::mt19937_64 rng(seed);
  VerifyReport rep;
  rep.checks.push_back(verify_contractivity(rng, cases));
  rep.checks.push_back(verify_cordoba(rng, cases));
  rep.checks.push_back(verify_power_difference(rng, cases));
  rep.checks.push_back(verify_young(rng, cases));
  for (const auto& c : rep.checks) rep.all_passed = rep.all_passed && c.passed;
  return rep;
}

}  // namespace fujita
