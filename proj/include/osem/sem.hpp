#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "osem/ofdm.hpp"
#include "osem/util.hpp"

// Periodic side-effect modulation (SEM): the unintended AC component of a
// luminaire's light output. Four waveform families are generated on a common
// phase argument phi(n) = 2 pi n l / n_fft + theta0, each scaled so that the
// analytic variance equals the configured value.
namespace osem::sem {

enum class Waveform { sine, clipped_sine, sawtooth, square };

struct Config {
  Waveform waveform = Waveform::sine;
  double l = 2.56;         // normalized frequency, cycles per n_fft samples
  double variance = 0.005;  // intensity^2
  double theta0 = 0.0;      // phase at sample 0
};

// Exact fundamental of the scaled waveform, for use as estimator ground
// truth. `phase` is the phase of the fundamental at sample 0; the sawtooth's
// fundamental is in quadrature with cos(phi), the others are in phase.
struct GroundTruth {
  double amplitude = 0.0;
  double phase = 0.0;
  double l = 0.0;
};

namespace detail {

inline double frac(double x) { return x - std::floor(x); }

// Unit-variance prototypes on the phase angle phi. theta0 means the same
// thing for every waveform; the sawtooth rises over one period of phi.
inline double prototype(Waveform w, double phi) {
  switch (w) {
    case Waveform::sine:
      return std::numbers::sqrt2 * std::cos(phi);
    case Waveform::square:
      return std::cos(phi) >= 0.0 ? 1.0 : -1.0;
    case Waveform::sawtooth:
      return std::numbers::sqrt3 * (2.0 * frac(phi / (2.0 * std::numbers::pi)) - 1.0);
    case Waveform::clipped_sine: {
      // half-wave rectified cosine, mean removed, unit variance
      constexpr double inv_pi = 1.0 / std::numbers::pi;
      const double norm = std::sqrt(0.25 - inv_pi * inv_pi);
      return (std::max(std::cos(phi), 0.0) - inv_pi) / norm;
    }
  }
  return 0.0;
}

}  // namespace detail

inline std::vector<double> generate(const Config& cfg, std::size_t count, std::size_t n_fft) {
  if (count == 0) throw std::invalid_argument("sem: sample count must be positive");
  if (!(cfg.l > 0.0) || !(cfg.l < static_cast<double>(n_fft) / 2.0))
    throw std::invalid_argument("sem: normalized frequency must lie in (0, n/2)");
  if (cfg.variance < 0.0) throw std::invalid_argument("sem: variance must be nonnegative");
  const double sigma = std::sqrt(cfg.variance);
  const double step = 2.0 * std::numbers::pi * cfg.l / static_cast<double>(n_fft);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = sigma * detail::prototype(cfg.waveform, static_cast<double>(k) * step + cfg.theta0);
  return out;
}

// Phase of the SEM at the first sample of OFDM symbol i (1-based):
// theta_i = theta0 + 2 pi l (1 + n_cp/n) (i - 1), reduced mod 2 pi.
inline double phase_at_symbol(const Config& cfg, std::size_t symbol_index, const ofdm::Config& ofdm_cfg) {
  if (symbol_index < 1) throw std::invalid_argument("sem: symbol index is 1-based");
  const double per_symbol =
      2.0 * std::numbers::pi * cfg.l *
      (1.0 + static_cast<double>(ofdm_cfg.cp_len) / static_cast<double>(ofdm_cfg.fft_size));
  return wrap_two_pi(cfg.theta0 + per_symbol * static_cast<double>(symbol_index - 1));
}

inline GroundTruth fundamental_of(const Config& cfg) {
  const double sigma = std::sqrt(cfg.variance);
  GroundTruth g;
  g.l = cfg.l;
  g.phase = wrap_two_pi(cfg.theta0);
  switch (cfg.waveform) {
    case Waveform::sine:
      g.amplitude = std::numbers::sqrt2 * sigma;
      break;
    case Waveform::square:
      g.amplitude = (4.0 / std::numbers::pi) * sigma;
      break;
    case Waveform::sawtooth:
      // fundamental is -(2/pi) sin(phi) before scaling: quadrature with cos
      g.amplitude = (2.0 * std::numbers::sqrt3 / std::numbers::pi) * sigma;
      g.phase = wrap_two_pi(cfg.theta0 + std::numbers::pi / 2.0);
      break;
    case Waveform::clipped_sine: {
      constexpr double inv_pi = 1.0 / std::numbers::pi;
      g.amplitude = 0.5 / std::sqrt(0.25 - inv_pi * inv_pi) * sigma;
      break;
    }
  }
  return g;
}

}  // namespace osem::sem
