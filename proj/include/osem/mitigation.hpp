#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "osem/fft.hpp"
#include "osem/ofdm.hpp"
#include "osem/util.hpp"

// Estimation and subtraction of the fundamental component of a periodic
// interferer riding on the received signal. Two residual sources:
//
//   blind: a conventional pass detects the data, the detected symbols are
//          remodulated and subtracted from the received signal, leaving
//          interference + noise + decision noise;
//   pilot: a known transmitted block is subtracted directly, so the residual
//          carries no decision noise.
//
// The fundamental's amplitude and phase then come from a linear least-squares
// fit of a1 cos(w n) - a2 sin(w n) over the whole residual window, and the
// reconstructed sinusoid is subtracted from the received samples. When the
// interferer frequency is unknown it is first located by a coarse DFT peak
// search refined by iterative interpolation on half-bin-offset DFT
// coefficients.
namespace osem::mitigation {

using cplx = std::complex<double>;

enum class Mode { none, blind, pilot };

struct Config {
  Mode mode = Mode::none;
  std::size_t window_symbols = 1000;  // L
  bool frequency_known = true;
  int freq_iterations = 2;  // refinement passes when estimating the frequency
};

struct SinusoidEstimate {
  double amplitude = 0.0;  // nonnegative
  double phase = 0.0;       // [0, 2pi), atan2-consistent with (a1, a2)
  double freq = 0.0;        // normalized, cycles per n_fft samples
  double a1 = 0.0;          // amplitude * cos(phase)
  double a2 = 0.0;          // amplitude * sin(phase)
};

struct Residual {
  std::vector<double> samples;
};

struct DegenerateFrequency : std::runtime_error {
  explicit DegenerateFrequency(const std::string& what) : std::runtime_error(what) {}
};

struct FrequencyAtEdge : std::runtime_error {
  explicit FrequencyAtEdge(const std::string& what) : std::runtime_error(what) {}
};

// Remodulate detected symbols with the same modulator and transmit scale as
// the transmitter; exact when the decisions are error-free.
inline std::vector<double> regenerate(const std::vector<ofdm::Decision>& decisions,
                                      const ofdm::Config& cfg) {
  std::vector<double> out;
  out.reserve(decisions.size() * cfg.symbol_len());
  for (const auto& d : decisions) {
    const auto frame = ofdm::build_frame(d.symbols, cfg);
    const auto tf = ofdm::modulate(frame, cfg);
    out.insert(out.end(), tf.samples.begin(), tf.samples.end());
  }
  return out;
}

inline Residual residual(std::span<const double> y, std::span<const double> x_hat) {
  if (y.size() != x_hat.size()) throw std::invalid_argument("mitigation: length mismatch");
  Residual r;
  r.samples.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) r.samples[i] = y[i] - x_hat[i];
  return r;
}

// Least-squares fit of a single sinusoid of known normalized frequency l to
// the residual window. The two-column regressor has rows
// [cos(2 pi n l / n_fft), -sin(2 pi n l / n_fft)] with n running across the
// whole window, and the 2x2 normal equations are solved in closed form.
inline SinusoidEstimate ls_fit(const Residual& r, double l, std::size_t n_fft) {
  const std::size_t count = r.samples.size();
  if (count < 2) throw std::invalid_argument("mitigation: residual too short for a fit");
  const double w = 2.0 * std::numbers::pi * l / static_cast<double>(n_fft);
  double scc = 0.0, sss = 0.0, scs = 0.0, src = 0.0, srs = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    const double arg = w * static_cast<double>(n);
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    const double v = r.samples[n];
    scc += c * c;
    sss += s * s;
    scs += c * s;
    src += v * c;
    srs += v * s;
  }
  const double det = scc * sss - scs * scs;
  const double window = static_cast<double>(count);
  if (det < 1e-9 * window * window)
    throw DegenerateFrequency("mitigation: regressor is singular at l = " + std::to_string(l));
  SinusoidEstimate est;
  est.a1 = (sss * src - scs * srs) / det;
  est.a2 = (scs * src - scc * srs) / det;
  est.amplitude = std::hypot(est.a1, est.a2);
  est.phase = est.amplitude > 0.0 ? wrap_two_pi(std::atan2(est.a2, est.a1)) : 0.0;
  est.freq = l;
  return est;
}

inline std::vector<double> subtract_fundamental(std::span<const double> y, const SinusoidEstimate& est,
                                                std::size_t n_fft) {
  if (!std::isfinite(est.amplitude) || !std::isfinite(est.phase) || !std::isfinite(est.freq))
    throw std::invalid_argument("mitigation: estimate is not finite");
  const double w = 2.0 * std::numbers::pi * est.freq / static_cast<double>(n_fft);
  std::vector<double> out(y.size());
  for (std::size_t n = 0; n < y.size(); ++n)
    out[n] = y[n] - est.amplitude * std::cos(w * static_cast<double>(n) + est.phase);
  return out;
}

// Phase of the estimate advanced by a whole number of OFDM symbols, for
// applying a pilot-derived estimate to the samples that follow the pilot.
inline SinusoidEstimate advance_phase(const SinusoidEstimate& est, std::size_t symbols,
                                      const ofdm::Config& cfg) {
  SinusoidEstimate out = est;
  const double per_symbol = 2.0 * std::numbers::pi * est.freq *
                            (1.0 + static_cast<double>(cfg.cp_len) / static_cast<double>(cfg.fft_size));
  out.phase = wrap_two_pi(est.phase + per_symbol * static_cast<double>(symbols));
  out.a1 = out.amplitude * std::cos(out.phase);
  out.a2 = out.amplitude * std::sin(out.phase);
  return out;
}

namespace detail {

// DFT coefficient of a real window at a fractional bin index.
inline cplx fractional_bin(std::span<const double> s, double bin) {
  const std::size_t n = s.size();
  const cplx step = std::polar(1.0, -2.0 * std::numbers::pi * bin / static_cast<double>(n));
  cplx rot{1.0, 0.0};
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    acc += s[i] * rot;
    rot *= step;
    if ((i & 0xFFFu) == 0xFFFu) rot /= std::abs(rot);  // keep |rot| = 1
  }
  return acc;
}

}  // namespace detail

// Interpolated-DFT frequency estimate of the dominant sinusoid in the
// residual. Coarse stage: integer argmax of the window DFT magnitude. Fine
// stage, repeated `iterations` times starting from delta = 0:
//   X_pm = DFT coefficient at bin m + delta +- 1/2
//   delta += Re{(X_plus + X_minus) / (X_plus - X_minus)} / 2
// Returns (m + delta) * n_fft / window_length in normalized-frequency units.
inline double estimate_frequency(const Residual& r, int iterations, std::size_t n_fft) {
  const auto& s = r.samples;
  const std::size_t total = s.size();
  if (total < 64) throw std::invalid_argument("mitigation: window too short for frequency estimation");
  if (iterations < 1) throw std::invalid_argument("mitigation: iterations must be at least 1");

  std::vector<cplx> buf(total);
  for (std::size_t i = 0; i < total; ++i) buf[i] = cplx{s[i], 0.0};
  const auto spectrum = fft::dft(buf);
  std::size_t peak = 0;
  double peak_mag = -1.0;
  for (std::size_t k = 0; k <= total / 2; ++k) {
    const double mag = std::norm(spectrum[k]);
    if (mag > peak_mag) {
      peak_mag = mag;
      peak = k;
    }
  }
  if (peak == 0 || (total % 2 == 0 && peak == total / 2))
    throw FrequencyAtEdge("mitigation: spectral peak at bin " + std::to_string(peak));

  double delta = 0.0;
  for (int q = 0; q < iterations; ++q) {
    const cplx xp = detail::fractional_bin(s, static_cast<double>(peak) + delta + 0.5);
    const cplx xm = detail::fractional_bin(s, static_cast<double>(peak) + delta - 0.5);
    delta += 0.5 * ((xp + xm) / (xp - xm)).real();
  }
  return (static_cast<double>(peak) + delta) * static_cast<double>(n_fft) / static_cast<double>(total);
}

// Decision-directed estimate over one window: conventional detection,
// remodulation, residual, then the LS fit (with the frequency estimated
// first when it is not known).
inline SinusoidEstimate blind_estimate(std::span<const double> y, const ofdm::Config& cfg,
                                       const Config& mit, double l) {
  auto frames = ofdm::demodulate(y, cfg);
  std::vector<ofdm::Decision> decisions;
  decisions.reserve(frames.size());
  for (const auto& f : frames) decisions.push_back(ofdm::decide(f, cfg));
  const auto x_hat = regenerate(decisions, cfg);
  const auto res = residual(y, x_hat);
  const double l_used = mit.frequency_known ? l : estimate_frequency(res, mit.freq_iterations, cfg.fft_size);
  return ls_fit(res, l_used, cfg.fft_size);
}

struct BlindResult {
  std::vector<double> samples;
  SinusoidEstimate estimate;
  bool mitigated = false;  // false when estimation failed and y passed through
};

inline BlindResult blind_mitigate(std::span<const double> y, const ofdm::Config& cfg,
                                  const Config& mit, double l) {
  BlindResult out;
  try {
    out.estimate = blind_estimate(y, cfg, mit, l);
  } catch (const DegenerateFrequency&) {
    out.samples.assign(y.begin(), y.end());
    return out;
  } catch (const FrequencyAtEdge&) {
    out.samples.assign(y.begin(), y.end());
    return out;
  }
  out.samples = subtract_fundamental(y, out.estimate, cfg.fft_size);
  out.mitigated = true;
  return out;
}

// Pilot-assisted estimate: the residual is the received pilot block minus the
// known transmitted pilot block, with no decision stage.
inline SinusoidEstimate pilot_mitigate(std::span<const double> y_pilot, std::span<const double> x_pilot,
                                       const ofdm::Config& cfg, const Config& mit, double l) {
  const auto res = residual(y_pilot, x_pilot);
  const double l_used = mit.frequency_known ? l : estimate_frequency(res, mit.freq_iterations, cfg.fft_size);
  return ls_fit(res, l_used, cfg.fft_size);
}

}  // namespace osem::mitigation
