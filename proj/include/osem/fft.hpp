#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

// Self-contained DFT routines: iterative radix-2 for power-of-two sizes and
// Bluestein's chirp-z reduction for everything else. Plans are cached per
// thread, so all entry points are safe to call concurrently.
namespace osem::fft {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace detail {

struct Pow2Plan {
  std::vector<std::uint32_t> bitrev;
  std::vector<cplx> roots;  // roots[j] = exp(-i 2pi j / n), j < n/2

  explicit Pow2Plan(std::size_t n) : bitrev(n), roots(n / 2) {
    const int log2n = std::countr_zero(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t r = 0;
      for (int b = 0; b < log2n; ++b) r |= ((i >> b) & 1u) << (log2n - 1 - b);
      bitrev[i] = r;
    }
    for (std::size_t j = 0; j < n / 2; ++j)
      roots[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }
};

inline const Pow2Plan& pow2_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, Pow2Plan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Pow2Plan(n)).first;
  return it->second;
}

// In-place radix-2 transform, unnormalized. inverse=true conjugates twiddles.
inline void transform_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  const Pow2Plan& plan = pow2_plan(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = plan.bitrev[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n / len;
    for (std::size_t block = 0; block < n; block += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = plan.roots[k * step];
        if (inverse) w = std::conj(w);
        const cplx t = a[block + k + half] * w;
        a[block + k + half] = a[block + k] - t;
        a[block + k] += t;
      }
    }
  }
}

struct BluesteinPlan {
  std::size_t n;
  std::size_t m;
  std::vector<cplx> chirp;       // chirp[j] = exp(-i pi j^2 / n), j^2 reduced mod 2n
  std::vector<cplx> kernel_fft;  // FFT of the (circularly symmetric) conjugate chirp

  explicit BluesteinPlan(std::size_t n_) : n(n_), m(next_pow2(2 * n_ - 1)), chirp(n_) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t q = (static_cast<std::uint64_t>(j) * j) % (2 * n);
      chirp[j] = std::polar(1.0, -std::numbers::pi * static_cast<double>(q) / static_cast<double>(n));
    }
    std::vector<cplx> b(m, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
      b[j] = std::conj(chirp[j]);
      if (j != 0) b[m - j] = std::conj(chirp[j]);
    }
    transform_pow2(b, false);
    kernel_fft = std::move(b);
  }
};

inline const BluesteinPlan& bluestein_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, BluesteinPlan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, BluesteinPlan(n)).first;
  return it->second;
}

inline std::vector<cplx> dft_bluestein(std::span<const cplx> x) {
  const BluesteinPlan& plan = bluestein_plan(x.size());
  std::vector<cplx> a(plan.m, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < plan.n; ++j) a[j] = x[j] * plan.chirp[j];
  transform_pow2(a, false);
  for (std::size_t i = 0; i < plan.m; ++i) a[i] *= plan.kernel_fft[i];
  transform_pow2(a, true);
  const double inv_m = 1.0 / static_cast<double>(plan.m);
  std::vector<cplx> out(plan.n);
  for (std::size_t k = 0; k < plan.n; ++k) out[k] = a[k] * inv_m * plan.chirp[k];
  return out;
}

}  // namespace detail

// Unnormalized forward DFT, X(k) = sum_n x(n) exp(-i 2pi nk / N). Any length.
inline std::vector<cplx> dft(std::span<const cplx> x) {
  if (is_pow2(x.size())) {
    std::vector<cplx> a(x.begin(), x.end());
    detail::transform_pow2(a, false);
    return a;
  }
  return detail::dft_bluestein(x);
}

// Unnormalized inverse DFT (no 1/N factor).
inline std::vector<cplx> idft(std::span<const cplx> x) {
  if (is_pow2(x.size())) {
    std::vector<cplx> a(x.begin(), x.end());
    detail::transform_pow2(a, true);
    return a;
  }
  std::vector<cplx> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = std::conj(x[i]);
  c = detail::dft_bluestein(c);
  for (auto& v : c) v = std::conj(v);
  return c;
}

// Unitary pair: both directions carry 1/sqrt(N).
inline std::vector<cplx> forward_unitary(std::span<const cplx> x) {
  auto out = dft(x);
  const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (auto& v : out) v *= s;
  return out;
}

inline std::vector<cplx> inverse_unitary(std::span<const cplx> x) {
  auto out = idft(x);
  const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (auto& v : out) v *= s;
  return out;
}

inline std::vector<cplx> forward_unitary_real(std::span<const double> x) {
  std::vector<cplx> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = cplx{x[i], 0.0};
  return forward_unitary(c);
}

}  // namespace osem::fft
