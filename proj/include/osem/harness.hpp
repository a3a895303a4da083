#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "osem/channel.hpp"
#include "osem/mitigation.hpp"
#include "osem/ofdm.hpp"
#include "osem/rng.hpp"
#include "osem/sem.hpp"
#include "osem/util.hpp"

// Deterministic Monte-Carlo experiment runner. Every sweep point owns a seed
// derived from (master_seed, point index), so results do not depend on
// execution order or the number of worker threads. Within a point, each
// window draws a fresh uniform interferer phase and then evolves it
// continuously across the window's symbols.
namespace osem::harness {

enum class SweepKind { ebn0, sem_variance, sem_frequency, rmse_vs_l };

struct Stopping {
  std::uint64_t min_bits = 1'000'000;
  std::uint64_t min_errors = 100;
  std::uint64_t max_bits = 20'000'000;
};

struct ExperimentSpec {
  ofdm::Config ofdm{};
  sem::Config sem{sem::Waveform::sine, 2.56, 0.005, 0.0};
  double eb_opt_n0_db = 10.0;  // fixed channel point for non-ebn0 sweeps
  mitigation::Config mitigation{mitigation::Mode::none, 1000, true, 2};
  SweepKind sweep = SweepKind::ebn0;
  std::vector<double> axis{};
  Stopping stopping{};
  int num_estimates = 200;  // per RMSE point
  std::uint64_t master_seed = 1;

  void validate() const {
    ofdm.validate();
    if (axis.empty()) throw std::invalid_argument("harness: sweep axis is empty");
    for (std::size_t i = 1; i < axis.size(); ++i)
      if (!(axis[i] > axis[i - 1]))
        throw std::invalid_argument("harness: axis values must be strictly increasing");
    if (stopping.min_bits < 10'000) throw std::invalid_argument("harness: min_bits must be at least 10^4");
    if (stopping.min_errors < 50) throw std::invalid_argument("harness: min_errors must be at least 50");
    if (stopping.max_bits < stopping.min_bits)
      throw std::invalid_argument("harness: max_bits must be at least min_bits");
    if (mitigation.window_symbols < 1) throw std::invalid_argument("harness: window_symbols must be positive");
    if (mitigation.freq_iterations < 1) throw std::invalid_argument("harness: freq_iterations must be positive");
    if (sweep == SweepKind::rmse_vs_l) {
      if (mitigation.mode == mitigation::Mode::none)
        throw std::invalid_argument("harness: RMSE sweeps need blind or pilot mode");
      if (num_estimates < 1) throw std::invalid_argument("harness: num_estimates must be positive");
      for (const double v : axis)
        if (v < 1.0) throw std::invalid_argument("harness: RMSE axis values are symbol counts >= 1");
    }
    if (sweep == SweepKind::sem_frequency)
      for (const double v : axis)
        if (!(v > 0.0) || !(v < static_cast<double>(ofdm.fft_size) / 2.0))
          throw std::invalid_argument("harness: frequency axis values must lie in (0, n/2)");
  }
};

// One sweep point. BER rows fill errors/bits/ber; RMSE rows fill rmse_amp
// and rmse_phase (radians) and reuse `bits` for the estimate count.
struct SweepRow {
  double axis = 0.0;
  std::optional<std::uint64_t> errors{};
  std::optional<std::uint64_t> bits{};
  std::optional<double> ber{};
  std::optional<double> rmse_amp{};
  std::optional<double> rmse_phase{};
  std::uint64_t seed = 0;
  bool truncated = false;
  std::string note{};  // nonempty only when the point failed

  friend bool operator==(const SweepRow& a, const SweepRow& b) {
    return a.axis == b.axis && a.errors == b.errors && a.bits == b.bits && a.ber == b.ber &&
           a.rmse_amp == b.rmse_amp && a.rmse_phase == b.rmse_phase && a.seed == b.seed;
  }
};

struct SweepResult {
  ExperimentSpec spec{};
  std::vector<SweepRow> rows{};
};

namespace detail {

inline ExperimentSpec at_axis(const ExperimentSpec& spec, double axis_value) {
  ExperimentSpec s = spec;
  switch (spec.sweep) {
    case SweepKind::ebn0:
      s.eb_opt_n0_db = axis_value;
      break;
    case SweepKind::sem_variance:
      s.sem.variance = axis_value;
      break;
    case SweepKind::sem_frequency:
      s.sem.l = axis_value;
      break;
    case SweepKind::rmse_vs_l:
      break;  // the axis is the window length, applied by the RMSE runner
  }
  return s;
}

// Modulates `symbols` OFDM symbols worth of fresh random bits; returns the
// concatenated time-domain signal and the bits.
struct TxBlock {
  std::vector<std::uint8_t> bits;
  std::vector<double> samples;
};

inline TxBlock make_tx_block(const ofdm::Config& cfg, std::size_t symbols, SplitMix64& rng) {
  const std::size_t bps = cfg.bits_per_symbol();
  TxBlock tx;
  tx.bits.resize(symbols * bps);
  rng.fill_bits(tx.bits);
  tx.samples.reserve(symbols * cfg.symbol_len());
  for (std::size_t i = 0; i < symbols; ++i) {
    const auto syms = qam::map_bits(std::span(tx.bits).subspan(i * bps, bps), cfg.qam_order);
    const auto frame = ofdm::build_frame(syms, cfg);
    const auto tf = ofdm::modulate(frame, cfg);
    tx.samples.insert(tx.samples.end(), tf.samples.begin(), tf.samples.end());
  }
  return tx;
}

inline std::uint64_t count_bit_errors(std::span<const double> rx, std::span<const std::uint8_t> tx_bits,
                                      const ofdm::Config& cfg) {
  const auto frames = ofdm::demodulate(rx, cfg);
  const std::size_t bps = cfg.bits_per_symbol();
  std::uint64_t errors = 0;
  for (std::size_t s = 0; s < frames.size(); ++s) {
    const auto dec = ofdm::decide(frames[s], cfg);
    const std::uint8_t* want = tx_bits.data() + s * bps;
    for (std::size_t b = 0; b < bps; ++b) errors += dec.bits[b] != want[b];
  }
  return errors;
}

}  // namespace detail

inline SweepRow run_ber_point(const ExperimentSpec& spec, double axis_value, std::uint64_t seed) {
  const ExperimentSpec s = detail::at_axis(spec, axis_value);
  const ofdm::Config& cfg = s.ofdm;
  cfg.validate();
  const std::size_t L = s.mitigation.window_symbols;
  const std::size_t nt = cfg.symbol_len();
  const std::size_t bps = cfg.bits_per_symbol();
  const double sigma = channel::noise_sigma(s.eb_opt_n0_db, cfg.bits_per_sample(), 1.0);
  const bool pilot = s.mitigation.mode == mitigation::Mode::pilot;
  const bool blind = s.mitigation.mode == mitigation::Mode::blind;

  SplitMix64 rng(seed);
  std::uint64_t bit_count = 0;
  std::uint64_t err_count = 0;
  while ((bit_count < s.stopping.min_bits || err_count < s.stopping.min_errors) &&
         bit_count < s.stopping.max_bits) {
    const double theta0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const std::size_t tx_symbols = pilot ? 2 * L : L;  // pilot block + data block
    const auto tx = detail::make_tx_block(cfg, tx_symbols, rng);

    std::vector<double> sem_samples;
    if (s.sem.variance > 0.0) {
      sem::Config sc = s.sem;
      sc.theta0 = theta0;
      sem_samples = sem::generate(sc, tx.samples.size(), cfg.fft_size);
    } else {
      sem_samples.assign(tx.samples.size(), 0.0);
    }
    const auto y = channel::transmit(tx.samples, sem_samples, sigma, rng);

    if (blind) {
      const auto res = mitigation::blind_mitigate(y, cfg, s.mitigation, s.sem.l);
      err_count += detail::count_bit_errors(res.samples, tx.bits, cfg);
      bit_count += L * bps;
    } else if (pilot) {
      const std::span<const double> y_pilot(y.data(), L * nt);
      const std::span<const double> x_pilot(tx.samples.data(), L * nt);
      const std::span<const double> y_data(y.data() + L * nt, L * nt);
      const std::span<const std::uint8_t> data_bits(tx.bits.data() + L * bps, L * bps);
      std::vector<double> cleaned;
      try {
        const auto est = mitigation::pilot_mitigate(y_pilot, x_pilot, cfg, s.mitigation, s.sem.l);
        const auto est_at_data = mitigation::advance_phase(est, L, cfg);
        cleaned = mitigation::subtract_fundamental(y_data, est_at_data, cfg.fft_size);
      } catch (const mitigation::DegenerateFrequency&) {
        cleaned.assign(y_data.begin(), y_data.end());
      } catch (const mitigation::FrequencyAtEdge&) {
        cleaned.assign(y_data.begin(), y_data.end());
      }
      err_count += detail::count_bit_errors(cleaned, data_bits, cfg);
      bit_count += L * bps;
    } else {
      err_count += detail::count_bit_errors(y, tx.bits, cfg);
      bit_count += L * bps;
    }
  }

  SweepRow row;
  row.axis = axis_value;
  row.errors = err_count;
  row.bits = bit_count;
  row.ber = static_cast<double>(err_count) / static_cast<double>(bit_count);
  row.seed = seed;
  row.truncated = err_count < s.stopping.min_errors;
  return row;
}

inline SweepRow run_rmse_point(const ExperimentSpec& spec, double window_symbols, std::uint64_t seed) {
  ExperimentSpec s = spec;
  s.mitigation.window_symbols = static_cast<std::size_t>(window_symbols);
  const ofdm::Config& cfg = s.ofdm;
  cfg.validate();
  if (s.mitigation.mode == mitigation::Mode::none)
    throw std::invalid_argument("harness: RMSE points need blind or pilot mode");
  const std::size_t L = s.mitigation.window_symbols;
  const double sigma = channel::noise_sigma(s.eb_opt_n0_db, cfg.bits_per_sample(), 1.0);
  const bool pilot = s.mitigation.mode == mitigation::Mode::pilot;

  SplitMix64 rng(seed);
  double se_amp = 0.0;
  double se_phase = 0.0;
  for (int i = 0; i < s.num_estimates; ++i) {
    sem::Config sc = s.sem;
    sc.theta0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const auto truth = sem::fundamental_of(sc);
    const auto tx = detail::make_tx_block(cfg, L, rng);
    const auto sem_samples = sem::generate(sc, tx.samples.size(), cfg.fft_size);
    const auto y = channel::transmit(tx.samples, sem_samples, sigma, rng);
    const auto est = pilot
                         ? mitigation::pilot_mitigate(y, tx.samples, cfg, s.mitigation, sc.l)
                         : mitigation::blind_estimate(y, cfg, s.mitigation, sc.l);
    se_amp += (est.amplitude - truth.amplitude) * (est.amplitude - truth.amplitude);
    const double dphi = wrap_pi(est.phase - truth.phase);
    se_phase += dphi * dphi;
  }

  SweepRow row;
  row.axis = window_symbols;
  row.bits = static_cast<std::uint64_t>(s.num_estimates);
  row.rmse_amp = std::sqrt(se_amp / s.num_estimates);
  row.rmse_phase = std::sqrt(se_phase / s.num_estimates);
  row.seed = seed;
  return row;
}

// Maps the per-point runner over the axis. Per-point seeds are derived from
// (master_seed, index); rows are identical for any worker count.
inline SweepResult run_sweep(const ExperimentSpec& spec, unsigned workers = 1,
                             std::ostream* progress = nullptr) {
  spec.validate();
  SweepResult out;
  out.spec = spec;
  out.rows.assign(spec.axis.size(), SweepRow{});

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= spec.axis.size()) break;
      const std::uint64_t seed = derive_seed(spec.master_seed, i);
      SweepRow row;
      try {
        row = spec.sweep == SweepKind::rmse_vs_l ? run_rmse_point(spec, spec.axis[i], seed)
                                                 : run_ber_point(spec, spec.axis[i], seed);
      } catch (const std::exception& e) {
        row.axis = spec.axis[i];
        row.seed = seed;
        row.truncated = true;
        row.note = e.what();
      }
      out.rows[i] = row;
      if (progress != nullptr) {
        std::lock_guard<std::mutex> lock(log_mutex);
        *progress << "  point " << (i + 1) << "/" << spec.axis.size() << ": axis=" << spec.axis[i];
        if (row.ber) *progress << " ber=" << *row.ber << " errors=" << *row.errors << " bits=" << *row.bits;
        if (row.rmse_amp) *progress << " rmse_amp=" << *row.rmse_amp << " rmse_phase=" << *row.rmse_phase;
        if (row.truncated) *progress << " [truncated]";
        if (!row.note.empty()) *progress << " [failed: " << row.note << "]";
        *progress << '\n';
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(spec.axis.size()));
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace osem::harness
