#pragma once

#include <cmath>
#include <optional>

#include "fujita/errors.hpp"

// Critical exponents and global-existence parameters of the semilinear
// problem u_t + L_{a,b} u = |u|^p + f as functions of (d, s, p) alone.

namespace fujita {

/// Fujita exponent 1 + 2s/d. Always in (1, 3).
inline double fujita_exponent(int d, double s) {
  if (d < 1) throw DomainError("fujita_exponent: d must be >= 1");
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("fujita_exponent: s must lie in (0,1)");
  return 1.0 + 2.0 * s / d;
}

/// Critical exponent d/(d-2s) of the forced problem; requires d > 2s.
inline double forcing_critical_exponent(int d, double s) {
  if (d < 1) throw DomainError("forcing_critical_exponent: d must be >= 1");
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("forcing_critical_exponent: s must lie in (0,1)");
  if (!(d > 2.0 * s))
    throw UndefinedExponentError(
        "forcing_critical_exponent: undefined unless d > 2s");
  return d / (d - 2.0 * s);
}

/// Weissler-type smallness exponent d(p-1)/(2s); exceeds 1 iff p exceeds the
/// Fujita exponent.
inline double weissler_exponent(int d, double s, double p) {
  if (d < 1) throw DomainError("weissler_exponent: d must be >= 1");
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("weissler_exponent: s must lie in (0,1)");
  if (!(p > 1.0)) throw DomainError("weissler_exponent: p must be > 1");
  return d * (p - 1.0) / (2.0 * s);
}

struct GlobalExistenceParameters {
  double p_c_s = 0.0;  // d(p-1)/(2s)
  double k = 0.0;      // p_c_s / p
  double q = 0.0;      // auxiliary integrability exponent
  double rho = 0.0;    // decay rate 1/(p-1) - d/(2qs)
};

/// Parameters of the supercritical global-existence construction. q is
/// under-determined (any value with 1/q strictly inside
/// (2s/(dp(p-1)), 2s/(d(p-1))) works); the midpoint in 1/q is used unless an
/// override is supplied. The returned tuple satisfies q > p_c_s > k >= 1,
/// rho > 0, and rho = (d/2s)(1/p_c_s - 1/q).
inline GlobalExistenceParameters global_existence_parameters(
    int d, double s, double p, std::optional<double> q_override = std::nullopt) {
  if (d < 1) throw DomainError("global_existence_parameters: d must be >= 1");
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("global_existence_parameters: s must lie in (0,1)");
  const double p_crit = forcing_critical_exponent(d, s);
  if (!(p > p_crit))
    throw ParameterDomainError(
        "global_existence_parameters: requires p > d/(d-2s)");
  GlobalExistenceParameters out;
  out.p_c_s = d * (p - 1.0) / (2.0 * s);
  out.k = out.p_c_s / p;
  const double inv_q_lo = 2.0 * s / (d * p * (p - 1.0));
  const double inv_q_hi = 2.0 * s / (d * (p - 1.0));
  double inv_q = 0.5 * (inv_q_lo + inv_q_hi);
  if (q_override) {
    inv_q = 1.0 / *q_override;
    if (!(inv_q > inv_q_lo && inv_q < inv_q_hi))
      throw ParameterDomainError(
          "global_existence_parameters: q override outside the admissible interval");
  }
  out.q = 1.0 / inv_q;
  out.rho = 1.0 / (p - 1.0) - d / (2.0 * out.q * s);
  return out;
}

/// All critical exponents and (where defined) global-existence parameters for
/// one (d, s, p) triple. Optional members are absent when the corresponding
/// hypothesis fails.
struct ExponentReport {
  int d = 1;
  double s = 0.5;
  double p = 2.0;
  double p_F = 0.0;
  std::optional<double> p_crit;  // only when d > 2s
  double p_c_s = 0.0;
  double k = 0.0;
  std::optional<double> q;
  std::optional<double> rho;
};

inline ExponentReport exponent_report(int d, double s, double p) {
  ExponentReport r;
  r.d = d;
  r.s = s;
  r.p = p;
  r.p_F = fujita_exponent(d, s);
  r.p_c_s = weissler_exponent(d, s, p);
  r.k = r.p_c_s / p;
  if (d > 2.0 * s) {
    r.p_crit = forcing_critical_exponent(d, s);
    if (p > *r.p_crit) {
      const auto gp = global_existence_parameters(d, s, p);
      r.q = gp.q;
      r.rho = gp.rho;
    }
  }
  return r;
}

}  // namespace fujita
