#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

namespace osem {

// splitmix64 finalizer, usable as a stand-alone 64-bit hash.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stable seed for sweep point `index` under `master`. This derivation is part
// of the reproducibility contract: seed_i = mix64(master XOR mix64(index)).
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index));
}

// Counter-style splitmix64 generator. Uniform, Gaussian and bit draws are
// produced in-library so that a (seed, call sequence) pair yields identical
// streams on every standard library.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]; never 0, safe under log().
  double uniform01() {
    return static_cast<double>((operator()() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; the second variate is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double t = 2.0 * std::numbers::pi * uniform01();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Bits are peeled LSB-first from consecutive 64-bit words.
  void fill_bits(std::span<std::uint8_t> out) {
    std::uint64_t word = 0;
    int left = 0;
    for (auto& b : out) {
      if (left == 0) {
        word = operator()();
        left = 64;
      }
      b = static_cast<std::uint8_t>(word & 1u);
      word >>= 1;
      --left;
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace osem
