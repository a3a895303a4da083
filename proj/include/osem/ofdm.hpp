#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "osem/fft.hpp"
#include "osem/qam.hpp"

// Intensity-modulated optical OFDM. Two unipolar schemes:
//
//   ACO: data on odd subcarriers 1, 3, ..., n/2-1; negative samples are
//        clipped to zero. Clipping falls entirely on the even subcarriers
//        and halves the odd ones, undone at the receiver by alpha = 2.
//   DCO: data on subcarriers 1 .. n/2-1; a DC bias of mu standard deviations
//        is added before clipping the remaining negatives; alpha = 1.
//
// Frames are Hermitian-symmetric so the IDFT is real; the DFT pair is
// unitary (1/sqrt(n) both ways). The clipped signal is multiplied by a
// deterministic transmit scale chosen so that its analytic (Gaussian
// approximation) mean optical power is exactly 1.
namespace osem::ofdm {

using cplx = std::complex<double>;

enum class Scheme { aco, dco };

namespace detail {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace detail

struct Config {
  std::size_t fft_size = 128;
  std::size_t cp_len = 0;
  Scheme scheme = Scheme::aco;
  int qam_order = 16;
  std::optional<double> bias_db{};       // DCO only
  std::optional<double> bandwidth_hz{};  // reporting only

  std::size_t symbol_len() const { return fft_size + cp_len; }

  double alpha() const { return scheme == Scheme::aco ? 2.0 : 1.0; }

  std::size_t num_data_subcarriers() const {
    return scheme == Scheme::aco ? fft_size / 4 : fft_size / 2 - 1;
  }

  std::vector<std::size_t> data_subcarriers() const {
    std::vector<std::size_t> idx;
    idx.reserve(num_data_subcarriers());
    const std::size_t step = scheme == Scheme::aco ? 2 : 1;
    for (std::size_t k = 1; k < fft_size / 2; k += step) idx.push_back(k);
    return idx;
  }

  std::size_t bits_per_symbol() const {
    return num_data_subcarriers() * static_cast<std::size_t>(qam::Constellation::make(qam_order).bits_per_symbol);
  }

  double bits_per_sample() const {
    return static_cast<double>(bits_per_symbol()) / static_cast<double>(symbol_len());
  }

  double bias_mu() const {
    if (!bias_db) throw std::invalid_argument("ofdm: bias_db unset");
    return std::sqrt(std::pow(10.0, *bias_db / 10.0) - 1.0);
  }

  // Standard deviation of the unclipped bipolar IDFT output for unit-energy
  // symbols: 2*num_data nonzero bins out of fft_size.
  double bipolar_sigma() const {
    return std::sqrt(2.0 * static_cast<double>(num_data_subcarriers()) / static_cast<double>(fft_size));
  }

  double dc_bias() const { return bias_mu() * bipolar_sigma(); }

  // Analytic mean of the clipped (and, for DCO, biased) signal before the
  // transmit scale: sigma/sqrt(2*pi) for ACO, sigma*(mu*Phi(mu) + phi(mu))
  // for DCO.
  double clipped_mean() const {
    const double sigma = bipolar_sigma();
    if (scheme == Scheme::aco) return sigma / std::sqrt(2.0 * std::numbers::pi);
    const double mu = bias_mu();
    return sigma * (mu * detail::normal_cdf(mu) + detail::normal_pdf(mu));
  }

  double transmit_scale() const { return 1.0 / clipped_mean(); }

  double subcarrier_spacing_hz() const {
    if (!bandwidth_hz) throw std::invalid_argument("ofdm: bandwidth_hz unset");
    return 2.0 * *bandwidth_hz / static_cast<double>(fft_size);
  }

  void validate() const {
    if (fft_size < 16 || !fft::is_pow2(fft_size))
      throw std::invalid_argument("ofdm: fft_size must be a power of two, at least 16");
    if (cp_len >= fft_size) throw std::invalid_argument("ofdm: cp_len must be smaller than fft_size");
    qam::Constellation::make(qam_order);
    if (scheme == Scheme::dco) {
      if (!bias_db) throw std::invalid_argument("ofdm: DCO requires bias_db");
      if (*bias_db < 0.0) throw std::invalid_argument("ofdm: bias_db must be nonnegative");
    } else if (bias_db) {
      throw std::invalid_argument("ofdm: bias_db only applies to DCO");
    }
  }
};

// One symbol's subcarrier values, Hermitian-symmetric, bins 0 and n/2 zero.
struct FreqFrame {
  std::vector<cplx> bins;
};

// One modulated symbol: cp_len + fft_size nonnegative intensity samples.
struct TimeFrame {
  std::vector<double> samples;
};

inline FreqFrame build_frame(std::span<const cplx> symbols, const Config& cfg) {
  const auto idx = cfg.data_subcarriers();
  if (symbols.size() != idx.size())
    throw std::invalid_argument("ofdm: expected " + std::to_string(idx.size()) + " data symbols, got " +
                                std::to_string(symbols.size()));
  FreqFrame f;
  f.bins.assign(cfg.fft_size, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < idx.size(); ++i) {
    f.bins[idx[i]] = symbols[i];
    f.bins[cfg.fft_size - idx[i]] = std::conj(symbols[i]);
  }
  return f;
}

namespace detail {

inline std::vector<double> real_idft(const FreqFrame& frame) {
  const auto t = fft::inverse_unitary(frame.bins);
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = t[i].real();
  return x;
}

inline TimeFrame finish(std::vector<double> body, const Config& cfg) {
  const double g = cfg.transmit_scale();
  for (auto& v : body) v *= g;
  TimeFrame tf;
  tf.samples.reserve(cfg.symbol_len());
  tf.samples.insert(tf.samples.end(), body.end() - static_cast<std::ptrdiff_t>(cfg.cp_len), body.end());
  tf.samples.insert(tf.samples.end(), body.begin(), body.end());
  return tf;
}

}  // namespace detail

inline TimeFrame aco_modulate(const FreqFrame& frame, const Config& cfg) {
  if (frame.bins.size() != cfg.fft_size) throw std::invalid_argument("ofdm: frame size mismatch");
  for (std::size_t k = 0; k < cfg.fft_size; k += 2)
    if (std::abs(frame.bins[k]) != 0.0)
      throw std::invalid_argument("ofdm: ACO frame has nonzero even bins");
  auto x = detail::real_idft(frame);
  for (auto& v : x) v = std::max(v, 0.0);
  return detail::finish(std::move(x), cfg);
}

inline TimeFrame dco_modulate(const FreqFrame& frame, const Config& cfg) {
  if (frame.bins.size() != cfg.fft_size) throw std::invalid_argument("ofdm: frame size mismatch");
  const double b = cfg.dc_bias();  // throws if bias_db unset
  auto x = detail::real_idft(frame);
  for (auto& v : x) v = std::max(v + b, 0.0);
  return detail::finish(std::move(x), cfg);
}

inline TimeFrame modulate(const FreqFrame& frame, const Config& cfg) {
  return cfg.scheme == Scheme::aco ? aco_modulate(frame, cfg) : dco_modulate(frame, cfg);
}

// Per symbol: strip the cyclic prefix, apply the unitary DFT, undo the known
// transmit scale and apply the scheme's alpha. Output frames are ready for
// hard decisions.
inline std::vector<FreqFrame> demodulate(std::span<const double> received, const Config& cfg) {
  const std::size_t nt = cfg.symbol_len();
  if (nt == 0 || received.size() % nt != 0)
    throw std::invalid_argument("ofdm: received length is not a multiple of the symbol length");
  const double eq = cfg.alpha() / cfg.transmit_scale();
  std::vector<FreqFrame> frames(received.size() / nt);
  for (std::size_t s = 0; s < frames.size(); ++s) {
    auto bins = fft::forward_unitary_real(received.subspan(s * nt + cfg.cp_len, cfg.fft_size));
    for (auto& v : bins) v *= eq;
    frames[s].bins = std::move(bins);
  }
  return frames;
}

struct Decision {
  std::vector<cplx> symbols;
  std::vector<std::uint8_t> bits;
};

inline Decision decide(const FreqFrame& frame, const Config& cfg) {
  const qam::Constellation c = qam::Constellation::make(cfg.qam_order);
  Decision d;
  const auto idx = cfg.data_subcarriers();
  d.symbols.reserve(idx.size());
  d.bits.reserve(idx.size() * c.bits_per_symbol);
  for (const std::size_t k : idx) {
    const auto hd = qam::decide_symbol(c, frame.bins[k]);
    d.symbols.push_back(hd.point);
    qam::append_bits(c, hd, d.bits);
  }
  return d;
}

}  // namespace osem::ofdm
