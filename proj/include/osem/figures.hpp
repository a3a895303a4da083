#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "osem/csv.hpp"
#include "osem/harness.hpp"

// Preset experiment catalog behind the `reproduce <id>` CLI command. Each id
// expands to a family of labeled sweeps written as one CSV per curve plus an
// optional gnuplot script. Desk-scale stopping rules keep a full figure in
// the minutes range; --full-scale raises them.
namespace osem::figures {

struct Curve {
  std::string label;
  harness::ExperimentSpec spec;
};

struct Figure {
  std::string id;
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool log_y = true;
  int y_column = 4;  // CSV column to plot (4 = ber, 5 = rmse_amp)
  std::vector<Curve> curves;
};

namespace detail {

inline std::vector<double> linspace(double lo, double step, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + step * i;
  return v;
}

inline harness::Stopping scale_stopping(bool full_scale) {
  return full_scale ? harness::Stopping{10'000'000, 300, 200'000'000}
                    : harness::Stopping{1'000'000, 100, 20'000'000};
}

inline harness::ExperimentSpec base_spec(ofdm::Scheme scheme, double bias_db, bool full_scale) {
  harness::ExperimentSpec s;
  s.ofdm.scheme = scheme;
  if (scheme == ofdm::Scheme::dco) s.ofdm.bias_db = bias_db;
  s.stopping = scale_stopping(full_scale);
  s.num_estimates = full_scale ? 1000 : 200;
  return s;
}

inline const std::vector<std::pair<std::string, sem::Waveform>>& waveforms() {
  static const std::vector<std::pair<std::string, sem::Waveform>> w = {
      {"sine", sem::Waveform::sine},
      {"clipped_sine", sem::Waveform::clipped_sine},
      {"sawtooth", sem::Waveform::sawtooth},
      {"square", sem::Waveform::square},
  };
  return w;
}

inline const std::vector<double>& variance_axis() {
  static const std::vector<double> v = {0.0002, 0.0005, 0.001, 0.0015, 0.002, 0.005, 0.01, 0.02};
  return v;
}

inline const std::vector<double>& window_axis() {
  static const std::vector<double> v = {100, 200, 400, 1000, 2000, 4000, 10000};
  return v;
}

// BER against Eb(opt)/N0 for the four waveforms at fixed variance, plus the
// interference-free reference.
inline Figure sem_impact_figure(const std::string& id, ofdm::Scheme scheme, double bias_db,
                                std::vector<double> axis, bool full_scale) {
  Figure f;
  f.id = id;
  f.title = std::string(scheme == ofdm::Scheme::aco ? "ACO-OFDM" : "DCO-OFDM") +
            " 16-QAM, SEM variance 0.005, l=2.56";
  f.xlabel = "Eb(opt)/N0 (dB)";
  f.ylabel = "BER";
  harness::ExperimentSpec base = base_spec(scheme, bias_db, full_scale);
  base.sweep = harness::SweepKind::ebn0;
  base.axis = std::move(axis);
  base.sem.variance = 0.005;
  base.sem.l = 2.56;
  {
    harness::ExperimentSpec s = base;
    s.sem.variance = 0.0;
    f.curves.push_back({"no_sem", s});
  }
  for (const auto& [name, w] : waveforms()) {
    harness::ExperimentSpec s = base;
    s.sem.waveform = w;
    f.curves.push_back({name, s});
  }
  return f;
}

// BER against SEM variance at a fixed channel point.
inline Figure variance_figure(const std::string& id, ofdm::Scheme scheme, double bias_db,
                              double ebn0_db, bool with_pilot_curves, bool full_scale) {
  Figure f;
  f.id = id;
  f.title = std::string(scheme == ofdm::Scheme::aco ? "ACO-OFDM" : "DCO-OFDM") +
            " 16-QAM at " + config::format_number(ebn0_db) + " dB, l=2.56";
  f.xlabel = "SEM variance";
  f.ylabel = "BER";
  f.log_x = true;
  harness::ExperimentSpec base = base_spec(scheme, bias_db, full_scale);
  base.sweep = harness::SweepKind::sem_variance;
  base.axis = variance_axis();
  base.eb_opt_n0_db = ebn0_db;
  base.sem.l = 2.56;
  for (const auto& [name, w] : waveforms()) {
    harness::ExperimentSpec s = base;
    s.sem.waveform = w;
    f.curves.push_back({name, s});
    if (with_pilot_curves) {
      harness::ExperimentSpec p = s;
      p.mitigation.mode = mitigation::Mode::pilot;
      f.curves.push_back({name + "_pilot", p});
    }
  }
  return f;
}

// Estimator amplitude RMS error against the window length.
inline Figure rmse_figure(const std::string& id, mitigation::Mode mode, bool vary_ebn0,
                          bool full_scale) {
  Figure f;
  f.id = id;
  f.title = std::string(mode == mitigation::Mode::blind ? "Blind" : "Pilot-assisted") +
            " amplitude RMS error, sinusoidal SEM, l=2.56";
  f.xlabel = "window length (OFDM symbols)";
  f.ylabel = "amplitude RMS error";
  f.log_x = true;
  f.y_column = 5;
  harness::ExperimentSpec base = base_spec(ofdm::Scheme::aco, 0.0, full_scale);
  base.sweep = harness::SweepKind::rmse_vs_l;
  base.axis = window_axis();
  base.mitigation.mode = mode;
  base.sem.l = 2.56;
  if (vary_ebn0) {
    base.sem.variance = 0.5;  // amplitude 1
    for (const double db : {0.0, 5.0, 20.0}) {
      harness::ExperimentSpec s = base;
      s.eb_opt_n0_db = db;
      f.curves.push_back({"ebn0_" + config::format_number(db) + "db", s});
    }
  } else {
    base.eb_opt_n0_db = 20.0;
    for (const double amp : {0.5, 1.0, 1.5}) {
      harness::ExperimentSpec s = base;
      s.sem.variance = amp * amp / 2.0;
      f.curves.push_back({"a_" + config::format_number(amp), s});
    }
  }
  return f;
}

// BER before/after mitigation for one waveform.
inline Figure mitigation_figure(const std::string& id, ofdm::Scheme scheme, double bias_db,
                                sem::Waveform w, const std::string& wname, std::vector<double> axis,
                                bool full_scale) {
  Figure f;
  f.id = id;
  f.title = std::string(scheme == ofdm::Scheme::aco ? "ACO-OFDM" : "DCO-OFDM") + " 16-QAM, " +
            wname + " SEM, variance 0.01, l=2.56, L=1000";
  f.xlabel = "Eb(opt)/N0 (dB)";
  f.ylabel = "BER";
  harness::ExperimentSpec base = base_spec(scheme, bias_db, full_scale);
  base.sweep = harness::SweepKind::ebn0;
  base.axis = std::move(axis);
  base.sem.waveform = w;
  base.sem.variance = 0.01;
  base.sem.l = 2.56;
  base.mitigation.window_symbols = 1000;
  for (const auto mode : {mitigation::Mode::none, mitigation::Mode::blind, mitigation::Mode::pilot}) {
    harness::ExperimentSpec s = base;
    s.mitigation.mode = mode;
    f.curves.push_back({config::mode_name(mode), s});
  }
  return f;
}

}  // namespace detail

inline std::vector<std::string> figure_ids() {
  return {"fig2",  "fig3a", "fig3b", "fig4a", "fig4b", "fig5",  "fig7a", "fig7b", "fig8a", "fig8b",
          "fig9a", "fig9b", "fig9c", "fig9d", "fig10a", "fig10b", "fig10c", "fig10d", "fig11a",
          "fig11b", "fig12"};
}

inline Figure make_figure(const std::string& id, bool full_scale = false) {
  using detail::linspace;
  if (id == "fig2")
    return detail::sem_impact_figure(id, ofdm::Scheme::aco, 0.0, linspace(0, 2, 9), full_scale);
  if (id == "fig3a")
    return detail::sem_impact_figure(id, ofdm::Scheme::dco, 7.0, linspace(0, 3, 9), full_scale);
  if (id == "fig3b")
    return detail::sem_impact_figure(id, ofdm::Scheme::dco, 13.0, linspace(0, 3, 10), full_scale);
  if (id == "fig4a")
    return detail::variance_figure(id, ofdm::Scheme::aco, 0.0, 10.0, false, full_scale);
  if (id == "fig4b")
    return detail::variance_figure(id, ofdm::Scheme::dco, 7.0, 21.0, false, full_scale);
  if (id == "fig5") {
    Figure f;
    f.id = id;
    f.title = "BER vs SEM normalized frequency, sinusoidal SEM, variance 0.005";
    f.xlabel = "normalized frequency l";
    f.ylabel = "BER";
    harness::ExperimentSpec aco = detail::base_spec(ofdm::Scheme::aco, 0.0, full_scale);
    aco.sweep = harness::SweepKind::sem_frequency;
    aco.axis = linspace(0.2, 0.2, 25);
    aco.eb_opt_n0_db = 10.0;
    aco.sem.variance = 0.005;
    f.curves.push_back({"aco_10db", aco});
    harness::ExperimentSpec dco = detail::base_spec(ofdm::Scheme::dco, 7.0, full_scale);
    dco.sweep = harness::SweepKind::sem_frequency;
    dco.axis = aco.axis;
    dco.eb_opt_n0_db = 21.0;
    dco.sem.variance = 0.005;
    f.curves.push_back({"dco7_21db", dco});
    return f;
  }
  if (id == "fig7a") return detail::rmse_figure(id, mitigation::Mode::blind, true, full_scale);
  if (id == "fig7b") return detail::rmse_figure(id, mitigation::Mode::blind, false, full_scale);
  if (id == "fig8a") return detail::rmse_figure(id, mitigation::Mode::pilot, true, full_scale);
  if (id == "fig8b") return detail::rmse_figure(id, mitigation::Mode::pilot, false, full_scale);
  const auto& wf = detail::waveforms();
  for (std::size_t i = 0; i < wf.size(); ++i) {
    const std::string letter(1, static_cast<char>('a' + i));
    if (id == "fig9" + letter)
      return detail::mitigation_figure(id, ofdm::Scheme::aco, 0.0, wf[i].second, wf[i].first,
                                       linspace(0, 2, 9), full_scale);
    if (id == "fig10" + letter)
      return detail::mitigation_figure(id, ofdm::Scheme::dco, 7.0, wf[i].second, wf[i].first,
                                       linspace(0, 3, 9), full_scale);
  }
  if (id == "fig11a")
    return detail::variance_figure(id, ofdm::Scheme::aco, 0.0, 10.0, true, full_scale);
  if (id == "fig11b")
    return detail::variance_figure(id, ofdm::Scheme::dco, 7.0, 21.0, true, full_scale);
  if (id == "fig12") {
    Figure f;
    f.id = id;
    f.title = "ACO-OFDM 16-QAM, sinusoidal SEM, variance 0.01: known vs estimated frequency";
    f.xlabel = "Eb(opt)/N0 (dB)";
    f.ylabel = "BER";
    harness::ExperimentSpec base = detail::base_spec(ofdm::Scheme::aco, 0.0, full_scale);
    base.sweep = harness::SweepKind::ebn0;
    base.axis = detail::linspace(0, 2, 9);
    base.sem.variance = 0.01;
    base.sem.l = 2.56;
    base.mitigation.window_symbols = 1000;
    for (const auto mode : {mitigation::Mode::blind, mitigation::Mode::pilot}) {
      for (const bool known : {true, false}) {
        harness::ExperimentSpec s = base;
        s.mitigation.mode = mode;
        s.mitigation.frequency_known = known;
        f.curves.push_back({std::string(config::mode_name(mode)) + (known ? "_known" : "_estimated"), s});
      }
    }
    return f;
  }
  throw std::invalid_argument("figures: unknown id '" + id + "'");
}

struct ReproduceOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool full_scale = false;
  bool plot = false;
  bool with_timestamp = true;
  std::optional<std::uint64_t> min_bits{};
  std::optional<std::uint64_t> min_errors{};
  std::optional<std::uint64_t> max_bits{};
  std::optional<int> num_estimates{};
  std::ostream* progress = nullptr;
};

struct ReproduceOutput {
  std::vector<std::string> csv_paths;
  std::string plot_path;
  std::vector<harness::SweepResult> results;
};

// Runs every curve of a figure and writes `<stem>_<label>.csv` files (stem is
// `out_path` minus a trailing .csv). Curve c uses master seed
// derive_seed(options.seed, c).
inline ReproduceOutput reproduce(const std::string& id, const std::string& out_path,
                                 const ReproduceOptions& options = {}) {
  Figure fig = make_figure(id, options.full_scale);
  std::string stem = out_path;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);

  ReproduceOutput out;
  std::vector<csv::PlotSeries> series;
  for (std::size_t c = 0; c < fig.curves.size(); ++c) {
    harness::ExperimentSpec spec = fig.curves[c].spec;
    spec.master_seed = derive_seed(options.seed, c);
    if (options.min_bits) spec.stopping.min_bits = *options.min_bits;
    if (options.min_errors) spec.stopping.min_errors = *options.min_errors;
    if (options.max_bits) spec.stopping.max_bits = *options.max_bits;
    if (options.num_estimates) spec.num_estimates = *options.num_estimates;
    if (options.progress != nullptr)
      *options.progress << fig.id << " curve '" << fig.curves[c].label << "' ("
                        << (c + 1) << "/" << fig.curves.size() << ")\n";
    auto result = harness::run_sweep(spec, options.workers, options.progress);
    const std::string path = stem + "_" + fig.curves[c].label + ".csv";
    csv::write_file(path, result, options.with_timestamp);
    out.csv_paths.push_back(path);
    series.push_back({fig.curves[c].label, path, fig.y_column});
    out.results.push_back(std::move(result));
  }
  if (options.plot) {
    out.plot_path = stem + ".gp";
    csv::emit_plot_script_file(out.plot_path, fig.title, fig.xlabel, fig.ylabel, fig.log_x, fig.log_y,
                               series, stem + ".svg");
  }
  return out;
}

}  // namespace osem::figures
