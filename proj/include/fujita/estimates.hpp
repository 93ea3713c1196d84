#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "fujita/capacity.hpp"
#include "fujita/field.hpp"
#include "fujita/operator_core.hpp"

// Empirical verification of the analytic estimates the existence proofs rely
// on: L^q -> L^r semigroup smoothing/decay, uniform boundedness, convexity of
// the fractional Laplacian under powers, and the elementary pointwise
// inequalities used in the contraction arguments.

namespace fujita {

struct DecayFit {
  double q = 1;
  double r = 2;
  double t_lo = 0;
  double t_hi = 0;
  double fitted_slope = 0;
  double theory_slope = 0;  // -(d/2s)(1/q - 1/r)
  double rel_error = 0;     // |fitted - theory| / |theory| (absolute when theory = 0)
};

/// Fit the large-time decay rate of ||e^{-tL} probe||_r / ||probe||_q over a
/// geometric time grid. Times where the kernel width sqrt(2at) + (bt)^{1/2s}
/// exceeds box/4 are excluded (boundary contamination); a norm below 1e-300
/// is a window error. q, r may be infinite (sup norm).
inline DecayFit decay_fit(const OperatorParams& params, double q, double r,
                          const Field& probe, const std::vector<double>& t_grid) {
  if (!(q >= 1) || !(r >= q)) throw DomainError("decay_fit: need 1 <= q <= r");
  if (t_grid.size() < 3) throw DomainError("decay_fit: need at least 3 times");
  const Grid& g = probe.grid();
  const double denom = std::isfinite(q) ? probe.lp_norm(q) : probe.linf_norm();
  if (!(denom > 0)) throw DomainError("decay_fit: probe must be nonzero");

  std::vector<double> lt, ln;
  double t_lo = 0, t_hi = 0;
  for (double t : t_grid) {
    if (!(t > 0)) throw DomainError("decay_fit: times must be positive");
    const double width =
        std::sqrt(2.0 * params.a * t) + std::pow(params.b * t, 1.0 / (2.0 * params.s));
    if (width > 0.25 * g.box_length) continue;  // boundary felt: excluded
    const Field ut = apply_semigroup(probe, params, t);
    const double nrm = std::isfinite(r) ? ut.lp_norm(r) : ut.linf_norm();
    if (nrm < 1e-300) throw WindowError("decay_fit: norm underflow in window");
    lt.push_back(std::log(t));
    ln.push_back(std::log(nrm / denom));
    if (t_lo == 0) t_lo = t;
    t_hi = t;
  }
  if (lt.size() < 3) throw WindowError("decay_fit: fewer than 3 usable times");

  DecayFit fit;
  fit.q = q;
  fit.r = r;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  const double inv_q = std::isfinite(q) ? 1.0 / q : 0.0;
  const double inv_r = std::isfinite(r) ? 1.0 / r : 0.0;
  fit.theory_slope = -(g.dim / (2.0 * params.s)) * (inv_q - inv_r);
  fit.fitted_slope = fit_line(lt, ln).slope;
  fit.rel_error = fit.theory_slope != 0.0
                      ? std::abs(fit.fitted_slope - fit.theory_slope) /
                            std::abs(fit.theory_slope)
                      : std::abs(fit.fitted_slope);
  return fit;
}

/// Largest positive part of (-Lap)^s[base^l] - l base^{l-1} (-Lap)^s[base]
/// over the grid (the convexity inequality says it should be <= 0).
/// Requires base >= 0 pointwise and l >= 1.
inline double cordoba_check(const Field& base, double s, double l) {
  if (!(l >= 1.0)) throw DomainError("cordoba_check: l must be >= 1");
  for (std::size_t i = 0; i < base.size(); ++i)
    if (base[i] < -1e-12)
      throw DomainError("cordoba_check: base must be nonnegative");
  const Grid& g = base.grid();
  std::vector<double> powl(base.size()), powl1(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double v = std::max(base[i], 0.0);
    powl[i] = std::pow(v, l);
    powl1[i] = l == 1.0 ? 1.0 : std::pow(v, l - 1.0);
  }
  const Field lhs =
      detail::frac_laplacian(Field::from_samples(g, std::move(powl)), s);
  const Field rhs_base = detail::frac_laplacian(base, s);
  double violation = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double gap = lhs[i] - l * powl1[i] * rhs_base[i];
    violation = std::max(violation, gap);
  }
  return violation;
}

struct InequalityReport {
  double qwe_violation = 0;       // ||u|^p - |v|^p| vs p|u-v|(|u|^{p-1}+|v|^{p-1})
  double product_violation_l1 = 0;  // ||u|^p|_1 vs |u|_inf^{p-1} |u|_1
  double product_violation_l2 = 0;
};

/// Pointwise checks of the elementary inequalities used by the contraction
/// argument; the reported numbers are maxima of LHS - RHS and should not
/// exceed round-off.
inline InequalityReport pointwise_inequality_suite(const Field& u, const Field& v,
                                                   double p) {
  if (!(p > 1)) throw DomainError("pointwise_inequality_suite: p must be > 1");
  if (!(u.grid() == v.grid()))
    throw InvalidFieldError("pointwise_inequality_suite: grids differ");
  InequalityReport rep;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double au = std::abs(u[i]);
    const double av = std::abs(v[i]);
    const double lhs = std::abs(std::pow(au, p) - std::pow(av, p));
    const double rhs =
        p * std::abs(u[i] - v[i]) * (std::pow(au, p - 1) + std::pow(av, p - 1));
    rep.qwe_violation = std::max(rep.qwe_violation, lhs - rhs);
  }
  std::vector<double> up(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) up[i] = std::pow(std::abs(u[i]), p);
  const Field upf = Field::from_samples(u.grid(), std::move(up));
  const double uinf = u.linf_norm();
  rep.product_violation_l1 =
      upf.l1_norm() - std::pow(uinf, p - 1) * u.l1_norm();
  rep.product_violation_l2 =
      upf.l2_norm() - std::pow(uinf, p - 1) * u.l2_norm();
  return rep;
}

/// Sharp constant of the weighted epsilon-Young inequality
/// A B <= eps A^p w + C(eps) B^{p/(p-1)} w^{-1/(p-1)}.
inline double young_constant(double eps, double p) {
  return std::pow(eps * p, -1.0 / (p - 1.0)) * (p - 1.0) / p;
}

}  // namespace fujita
