#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "osem/harness.hpp"

// TOML-style experiment configuration: [section] headers and key = value
// lines, mirroring the ExperimentSpec field names. Values are numbers,
// booleans, quoted strings or numeric arrays.
namespace osem::config {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] inline void fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("config: line " + std::to_string(line_no) + ": " + what);
}

inline double parse_number(const std::string& v, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) fail(line_no, "trailing characters after number '" + v + "'");
    return d;
  } catch (const std::invalid_argument&) {
    fail(line_no, "expected a number, got '" + v + "'");
  } catch (const std::out_of_range&) {
    fail(line_no, "number out of range: '" + v + "'");
  }
}

inline std::string parse_string(const std::string& v, std::size_t line_no) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') fail(line_no, "expected a quoted string");
  return v.substr(1, v.size() - 2);
}

inline bool parse_bool(const std::string& v, std::size_t line_no) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line_no, "expected true or false, got '" + v + "'");
}

inline std::vector<double> parse_array(const std::string& v, std::size_t line_no) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') fail(line_no, "expected an array [..]");
  std::vector<double> out;
  std::string body = v.substr(1, v.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line_no, "empty array element");
    out.push_back(parse_number(item, line_no));
  }
  return out;
}

}  // namespace detail

inline harness::ExperimentSpec load(std::istream& in,
                                    const harness::ExperimentSpec& base = harness::ExperimentSpec{}) {
  using detail::fail;
  harness::ExperimentSpec spec = base;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim(detail::strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "ofdm" && section != "sem" && section != "channel" && section != "mitigation" &&
          section != "sweep" && section != "stopping" && section != "run")
        fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line_no, "expected key = value");

    auto num = [&] { return detail::parse_number(value, line_no); };
    auto str = [&] { return detail::parse_string(value, line_no); };
    auto boolean = [&] { return detail::parse_bool(value, line_no); };

    if (section == "ofdm") {
      if (key == "n") spec.ofdm.fft_size = static_cast<std::size_t>(num());
      else if (key == "n_cp") spec.ofdm.cp_len = static_cast<std::size_t>(num());
      else if (key == "scheme") {
        const std::string v = str();
        if (v == "aco") spec.ofdm.scheme = ofdm::Scheme::aco;
        else if (v == "dco") spec.ofdm.scheme = ofdm::Scheme::dco;
        else fail(line_no, "scheme must be \"aco\" or \"dco\"");
      } else if (key == "qam_order") spec.ofdm.qam_order = static_cast<int>(num());
      else if (key == "bias_db") spec.ofdm.bias_db = num();
      else if (key == "bandwidth_hz") spec.ofdm.bandwidth_hz = num();
      else fail(line_no, "unknown key ofdm." + key);
    } else if (section == "sem") {
      if (key == "waveform") {
        const std::string v = str();
        if (v == "sine") spec.sem.waveform = sem::Waveform::sine;
        else if (v == "clipped_sine") spec.sem.waveform = sem::Waveform::clipped_sine;
        else if (v == "sawtooth") spec.sem.waveform = sem::Waveform::sawtooth;
        else if (v == "square") spec.sem.waveform = sem::Waveform::square;
        else fail(line_no, "unknown waveform \"" + v + "\"");
      } else if (key == "l") spec.sem.l = num();
      else if (key == "variance") spec.sem.variance = num();
      else if (key == "theta0") spec.sem.theta0 = num();
      else fail(line_no, "unknown key sem." + key);
    } else if (section == "channel") {
      if (key == "eb_opt_n0_db") spec.eb_opt_n0_db = num();
      else fail(line_no, "unknown key channel." + key);
    } else if (section == "mitigation") {
      if (key == "mode") {
        const std::string v = str();
        if (v == "none") spec.mitigation.mode = mitigation::Mode::none;
        else if (v == "blind") spec.mitigation.mode = mitigation::Mode::blind;
        else if (v == "pilot") spec.mitigation.mode = mitigation::Mode::pilot;
        else fail(line_no, "mode must be \"none\", \"blind\" or \"pilot\"");
      } else if (key == "window_symbols") spec.mitigation.window_symbols = static_cast<std::size_t>(num());
      else if (key == "frequency_known") spec.mitigation.frequency_known = boolean();
      else if (key == "freq_iterations") spec.mitigation.freq_iterations = static_cast<int>(num());
      else fail(line_no, "unknown key mitigation." + key);
    } else if (section == "sweep") {
      if (key == "kind") {
        const std::string v = str();
        if (v == "ebn0") spec.sweep = harness::SweepKind::ebn0;
        else if (v == "variance") spec.sweep = harness::SweepKind::sem_variance;
        else if (v == "freq") spec.sweep = harness::SweepKind::sem_frequency;
        else if (v == "rmse_vs_l") spec.sweep = harness::SweepKind::rmse_vs_l;
        else fail(line_no, "unknown sweep kind \"" + v + "\"");
      } else if (key == "axis") spec.axis = detail::parse_array(value, line_no);
      else fail(line_no, "unknown key sweep." + key);
    } else if (section == "stopping") {
      if (key == "min_bits") spec.stopping.min_bits = static_cast<std::uint64_t>(num());
      else if (key == "min_errors") spec.stopping.min_errors = static_cast<std::uint64_t>(num());
      else if (key == "max_bits") spec.stopping.max_bits = static_cast<std::uint64_t>(num());
      else fail(line_no, "unknown key stopping." + key);
    } else if (section == "run") {
      if (key == "master_seed") spec.master_seed = static_cast<std::uint64_t>(num());
      else if (key == "num_estimates") spec.num_estimates = static_cast<int>(num());
      else if (key == "rng") {
        if (str() != "splitmix64") fail(line_no, "only the \"splitmix64\" generator is available");
      } else fail(line_no, "unknown key run." + key);
    } else {
      fail(line_no, "key outside any section");
    }
  }
  return spec;
}

inline harness::ExperimentSpec load_file(const std::string& path,
                                         const harness::ExperimentSpec& base = harness::ExperimentSpec{}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  return load(in, base);
}

inline const char* scheme_name(ofdm::Scheme s) { return s == ofdm::Scheme::aco ? "aco" : "dco"; }

inline const char* waveform_name(sem::Waveform w) {
  switch (w) {
    case sem::Waveform::sine: return "sine";
    case sem::Waveform::clipped_sine: return "clipped_sine";
    case sem::Waveform::sawtooth: return "sawtooth";
    case sem::Waveform::square: return "square";
  }
  return "sine";
}

inline const char* mode_name(mitigation::Mode m) {
  switch (m) {
    case mitigation::Mode::none: return "none";
    case mitigation::Mode::blind: return "blind";
    case mitigation::Mode::pilot: return "pilot";
  }
  return "none";
}

inline const char* sweep_name(harness::SweepKind k) {
  switch (k) {
    case harness::SweepKind::ebn0: return "ebn0";
    case harness::SweepKind::sem_variance: return "variance";
    case harness::SweepKind::sem_frequency: return "freq";
    case harness::SweepKind::rmse_vs_l: return "rmse_vs_l";
  }
  return "ebn0";
}

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Round-trips through load().
inline std::string serialize(const harness::ExperimentSpec& spec) {
  std::ostringstream out;
  out << "[ofdm]\n";
  out << "n = " << spec.ofdm.fft_size << "\n";
  out << "n_cp = " << spec.ofdm.cp_len << "\n";
  out << "scheme = \"" << scheme_name(spec.ofdm.scheme) << "\"\n";
  out << "qam_order = " << spec.ofdm.qam_order << "\n";
  if (spec.ofdm.bias_db) out << "bias_db = " << format_number(*spec.ofdm.bias_db) << "\n";
  if (spec.ofdm.bandwidth_hz) out << "bandwidth_hz = " << format_number(*spec.ofdm.bandwidth_hz) << "\n";
  out << "\n[sem]\n";
  out << "waveform = \"" << waveform_name(spec.sem.waveform) << "\"\n";
  out << "l = " << format_number(spec.sem.l) << "\n";
  out << "variance = " << format_number(spec.sem.variance) << "\n";
  out << "theta0 = " << format_number(spec.sem.theta0) << "\n";
  out << "\n[channel]\n";
  out << "eb_opt_n0_db = " << format_number(spec.eb_opt_n0_db) << "\n";
  out << "\n[mitigation]\n";
  out << "mode = \"" << mode_name(spec.mitigation.mode) << "\"\n";
  out << "window_symbols = " << spec.mitigation.window_symbols << "\n";
  out << "frequency_known = " << (spec.mitigation.frequency_known ? "true" : "false") << "\n";
  out << "freq_iterations = " << spec.mitigation.freq_iterations << "\n";
  out << "\n[sweep]\n";
  out << "kind = \"" << sweep_name(spec.sweep) << "\"\n";
  out << "axis = [";
  for (std::size_t i = 0; i < spec.axis.size(); ++i) {
    if (i != 0) out << ", ";
    out << format_number(spec.axis[i]);
  }
  out << "]\n";
  out << "\n[stopping]\n";
  out << "min_bits = " << spec.stopping.min_bits << "\n";
  out << "min_errors = " << spec.stopping.min_errors << "\n";
  out << "max_bits = " << spec.stopping.max_bits << "\n";
  out << "\n[run]\n";
  out << "master_seed = " << spec.master_seed << "\n";
  out << "num_estimates = " << spec.num_estimates << "\n";
  out << "rng = \"splitmix64\"\n";
  return out.str();
}

}  // namespace osem::config
