#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "osem/rng.hpp"

// AWGN channel calibrated against the received optical energy per bit:
// E_b(opt) = p_opt^2 / R_b with per-sample noise variance N_0 / 2, so
// sigma_w = p_opt / sqrt(2 R_b 10^(gamma/10)).
namespace osem::channel {

struct Config {
  double eb_opt_n0_db = 10.0;
  double sigma_w = 0.0;
};

inline double noise_sigma(double eb_opt_n0_db, double bits_per_sample, double p_opt = 1.0) {
  if (!(bits_per_sample > 0.0)) throw std::invalid_argument("channel: bits_per_sample must be positive");
  return p_opt / std::sqrt(2.0 * bits_per_sample * std::pow(10.0, eb_opt_n0_db / 10.0));
}

inline Config make_config(double eb_opt_n0_db, double bits_per_sample, double p_opt = 1.0) {
  return Config{eb_opt_n0_db, noise_sigma(eb_opt_n0_db, bits_per_sample, p_opt)};
}

// y(n) = x(n) + s(n) + w(n), w white Gaussian with the given per-sample
// standard deviation. Deterministic for a given rng stream.
inline std::vector<double> transmit(std::span<const double> x, std::span<const double> sem_samples,
                                    double sigma_w, SplitMix64& rng) {
  if (x.size() != sem_samples.size()) throw std::invalid_argument("channel: length mismatch");
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + sem_samples[i] + sigma_w * rng.gaussian();
  return y;
}

}  // namespace osem::channel
