#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "fujita/errors.hpp"
#include "fujita/numerics.hpp"

namespace fujita {

/// Uniform periodic grid on a d-dimensional torus of side box_length,
/// n points per axis, coordinates x_j = -box/2 + j*h with h = box/n.
/// Axis index j maps to the symmetric integer frequency k = j (j <= n/2)
/// or j - n, with wavenumber 2*pi*k/box_length.
struct Grid {
  int dim = 1;
  int n = 16;
  double box_length = 1.0;

  static Grid make(int d, int n, double box_length) {
    if (d < 1 || d > 3) throw DomainError("Grid: d must be in {1,2,3}");
    if (!is_pow2(n) || n < 16)
      throw DomainError("Grid: n must be a power of two >= 16");
    if (!(box_length > 0.0) || !std::isfinite(box_length))
      throw DomainError("Grid: box_length must be positive");
    return Grid{d, n, box_length};
  }

  std::size_t size() const {
    std::size_t total = 1;
    for (int k = 0; k < dim; ++k) total *= static_cast<std::size_t>(n);
    return total;
  }

  double spacing() const { return box_length / n; }

  double cell_volume() const {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= spacing();
    return v;
  }

  double coord(int j) const { return -0.5 * box_length + j * spacing(); }

  int freq_index(int j) const { return j <= n / 2 ? j : j - n; }

  double wavenumber(int j) const {
    return kTwoPi * freq_index(j) / box_length;
  }

  /// Decompose a flat index (axis 0 contiguous) into per-axis indices.
  std::array<int, 3> unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int k = 0; k < dim; ++k) {
      idx[k] = static_cast<int>(flat % static_cast<std::size_t>(n));
      flat /= static_cast<std::size_t>(n);
    }
    return idx;
  }

  std::size_t flatten(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int k = dim - 1; k >= 0; --k)
      flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[k]);
    return flat;
  }

  /// Squared Euclidean wavenumber |xi|^2 of a flat spectral index.
  double wavenumber_sq(std::size_t flat) const {
    double w2 = 0;
    for (int k = 0; k < dim; ++k) {
      const int j = static_cast<int>(flat % static_cast<std::size_t>(n));
      flat /= static_cast<std::size_t>(n);
      const double w = wavenumber(j);
      w2 += w * w;
    }
    return w2;
  }

  /// Euclidean distance from the box center to grid point `flat`.
  double radius(std::size_t flat) const {
    double r2 = 0;
    for (int k = 0; k < dim; ++k) {
      const int j = static_cast<int>(flat % static_cast<std::size_t>(n));
      flat /= static_cast<std::size_t>(n);
      const double x = coord(j);
      r2 += x * x;
    }
    return std::sqrt(r2);
  }

  bool operator==(const Grid& o) const = default;
};

}  // namespace fujita
