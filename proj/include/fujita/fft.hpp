#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fujita/errors.hpp"
#include "fujita/numerics.hpp"

// Radix-2 complex FFT for power-of-two sizes, plus separable transforms on
// n^d cubes (d <= 3, axis 0 contiguous). Forward convention
// a_k = sum_j a_j exp(-2 pi i jk / n); the inverse here is unnormalized,
// callers divide by the total point count.

namespace fujita::fft {

using cplx = std::complex<double>;

namespace detail {

struct Plan {
  std::vector<std::size_t> bitrev;
  std::vector<cplx> twiddle;  // exp(-2 pi i j / n), j in [0, n/2)
};

// Twiddle/bit-reversal tables are cached per size. The cache is guarded by a
// mutex; the returned plan is immutable, so concurrent transforms may share it.
inline const Plan& plan_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<Plan>> cache;
  std::scoped_lock lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    auto plan = std::make_unique<Plan>();
    plan->bitrev.resize(n);
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      plan->bitrev[i] = j;
      std::size_t bit = n >> 1;
      while (bit && (j & bit)) {
        j ^= bit;
        bit >>= 1;
      }
      j |= bit;
    }
    plan->twiddle.resize(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) {
      const double ang = -kTwoPi * static_cast<double>(i) / static_cast<double>(n);
      plan->twiddle[i] = {std::cos(ang), std::sin(ang)};
    }
    slot = std::move(plan);
  }
  return *slot;
}

}  // namespace detail

/// In-place transform of length n (power of two). inverse=true conjugates the
/// twiddles but does not normalize.
inline void transform(cplx* a, std::size_t n, bool inverse) {
  if (n == 1) return;
  if (!is_pow2(static_cast<int>(n)))
    throw DomainError("fft: length must be a power of two");
  const auto& plan = detail::plan_for(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = plan.bitrev[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = plan.twiddle[k * step];
        if (inverse) w = std::conj(w);
        const cplx u = a[base + k];
        const cplx v = a[base + k + half] * w;
        a[base + k] = u + v;
        a[base + k + half] = u - v;
      }
    }
  }
}

/// Separable transform over an n^d cube stored with axis 0 contiguous
/// (index = i0 + n*(i1 + n*i2)).
inline void transform_nd(cplx* data, int d, std::size_t n, bool inverse) {
  if (d < 1 || d > 3) throw UnsupportedDimensionError("fft: d must be 1, 2 or 3");
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= n;
  std::vector<cplx> line(n);
  std::size_t stride = 1;
  for (int axis = 0; axis < d; ++axis) {
    if (axis == 0) {
      for (std::size_t off = 0; off < total; off += n) transform(data + off, n, inverse);
    } else {
      const std::size_t block = stride * n;  // span of one axis-line group
      for (std::size_t base = 0; base < total; base += block) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
          cplx* p = data + base + inner;
          for (std::size_t i = 0; i < n; ++i) line[i] = p[i * stride];
          transform(line.data(), n, inverse);
          for (std::size_t i = 0; i < n; ++i) p[i * stride] = line[i];
        }
      }
    }
    stride *= n;
  }
}

/// Forward DFT of real samples on an n^d cube.
inline std::vector<cplx> forward_real(const std::vector<double>& samples, int d,
                                      std::size_t n) {
  std::vector<cplx> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i];
  transform_nd(out.data(), d, n, false);
  return out;
}

/// Inverse DFT, normalized, real part. Imaginary residue from conjugate
/// symmetry round-off is discarded.
inline std::vector<double> inverse_to_real(std::vector<cplx> spec, int d,
                                           std::size_t n) {
  transform_nd(spec.data(), d, n, true);
  const double scale = 1.0 / static_cast<double>(spec.size());
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real() * scale;
  return out;
}

}  // namespace fujita::fft
