#pragma once

#include <cmath>
#include <map>
#include <string>

#include "fujita/field.hpp"

// Named initial-data / forcing families. All are centered in the box and must
// decay to negligible values before the box edge (periodic truncation).

namespace fujita {

using FamilyParams = std::map<std::string, double>;

namespace detail {

inline double family_param(const FamilyParams& params, const std::string& key,
                           double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

inline void reject_unknown_params(const std::string& family,
                                  const FamilyParams& params,
                                  std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok)
      throw FamilyError("family '" + family + "': unknown parameter '" + key + "'");
  }
}

/// Effective support radius must leave this many widths before the box edge.
inline void check_support(const std::string& family, const Grid& g, double extent,
                          double width) {
  // e^{-x^2/2w^2} drops below 1e-10 beyond ~6.8 widths.
  if (extent + 6.8 * width > 0.5 * g.box_length)
    throw FamilyError("family '" + family +
                      "': support exceeds the box (increase box_length)");
}

}  // namespace detail

/// Construct a named field family on a grid.
///   zero
///   gaussian(amp, center, width)          mass amp (2 pi)^{d/2} width^d
///   dipole(amp, sep, width)               two opposite gaussians, zero mass
///   ring(amp, radius, width)              bump on the sphere |x| = radius
///   neg_bump_pos_tail(amp, width)         sign-changing, positive mass
inline Field make_family(const std::string& name, const FamilyParams& params,
                         const Grid& g) {
  if (name == "zero" || name == "none") {
    detail::reject_unknown_params(name, params, {});
    return Field::zeros(g);
  }
  if (name == "gaussian") {
    detail::reject_unknown_params(name, params, {"amp", "center", "width"});
    const double amp = detail::family_param(params, "amp", 1.0);
    const double center = detail::family_param(params, "center", 0.0);
    const double width = detail::family_param(params, "width", 1.0);
    if (!(width > 0)) throw FamilyError("gaussian: width must be > 0");
    detail::check_support(name, g, std::abs(center), width);
    return Field::from_function(g, [&](const std::array<double, 3>& x) {
      double r2 = (x[0] - center) * (x[0] - center);
      for (int k = 1; k < g.dim; ++k) r2 += x[k] * x[k];
      return amp * std::exp(-r2 / (2.0 * width * width));
    });
  }
  if (name == "dipole") {
    detail::reject_unknown_params(name, params, {"amp", "sep", "width"});
    const double amp = detail::family_param(params, "amp", 1.0);
    const double sep = detail::family_param(params, "sep", 4.0);
    const double width = detail::family_param(params, "width", 1.0);
    if (!(width > 0) || !(sep > 0))
      throw FamilyError("dipole: sep and width must be > 0");
    detail::check_support(name, g, 0.5 * sep, width);
    return Field::from_function(g, [&](const std::array<double, 3>& x) {
      double tail2 = 0;
      for (int k = 1; k < g.dim; ++k) tail2 += x[k] * x[k];
      const double dp = (x[0] - 0.5 * sep) * (x[0] - 0.5 * sep) + tail2;
      const double dm = (x[0] + 0.5 * sep) * (x[0] + 0.5 * sep) + tail2;
      const double w2 = 2.0 * width * width;
      return amp * (std::exp(-dp / w2) - std::exp(-dm / w2));
    });
  }
  if (name == "ring") {
    detail::reject_unknown_params(name, params, {"amp", "radius", "width"});
    const double amp = detail::family_param(params, "amp", 1.0);
    const double radius = detail::family_param(params, "radius", 4.0);
    const double width = detail::family_param(params, "width", 1.0);
    if (!(width > 0) || !(radius > 0))
      throw FamilyError("ring: radius and width must be > 0");
    detail::check_support(name, g, radius, width);
    return Field::from_function(g, [&](const std::array<double, 3>& x) {
      double r2 = 0;
      for (int k = 0; k < g.dim; ++k) r2 += x[k] * x[k];
      const double d = std::sqrt(r2) - radius;
      return amp * std::exp(-d * d / (2.0 * width * width));
    });
  }
  if (name == "neg_bump_pos_tail") {
    detail::reject_unknown_params(name, params, {"amp", "width"});
    const double amp = detail::family_param(params, "amp", 1.0);
    const double width = detail::family_param(params, "width", 1.0);
    if (!(width > 0)) throw FamilyError("neg_bump_pos_tail: width must be > 0");
    detail::check_support(name, g, 0.0, width);
    // Wide positive gaussian minus a narrower, taller one: negative core,
    // positive tails, total mass amp (2 pi)^{d/2} (w^d - 1.5 (w/2)^d) > 0.
    return Field::from_function(g, [&](const std::array<double, 3>& x) {
      double r2 = 0;
      for (int k = 0; k < g.dim; ++k) r2 += x[k] * x[k];
      const double wide = std::exp(-r2 / (2.0 * width * width));
      const double narrow = std::exp(-r2 / (2.0 * 0.25 * width * width));
      return amp * (wide - 1.5 * narrow);
    });
  }
  throw FamilyError("unknown family '" + name + "'");
}

}  // namespace fujita
