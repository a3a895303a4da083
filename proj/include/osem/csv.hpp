#pragma once

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "osem/config_file.hpp"
#include "osem/harness.hpp"

// CSV output for sweep results. Fixed column set
//   axis,errors,bits,ber,rmse_amp,rmse_phase,seed
// with empty cells for fields a row kind does not carry. Comment lines
// (leading '#') echo the full experiment spec; timestamps live only in
// comments and can be suppressed. The header-plus-rows body is a pure
// function of (spec, master_seed).
namespace osem::csv {

inline constexpr const char* kHeader = "axis,errors,bits,ber,rmse_amp,rmse_phase,seed";

namespace detail {

// Shortest representation that parses back to the identical double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_row(const harness::SweepRow& r) {
  std::string out = format_double(r.axis);
  out += ',';
  if (r.errors) out += std::to_string(*r.errors);
  out += ',';
  if (r.bits) out += std::to_string(*r.bits);
  out += ',';
  if (r.ber) out += format_double(*r.ber);
  out += ',';
  if (r.rmse_amp) out += format_double(*r.rmse_amp);
  out += ',';
  if (r.rmse_phase) out += format_double(*r.rmse_phase);
  out += ',';
  out += std::to_string(r.seed);
  return out;
}

inline std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

// Header and data rows only; the determinism contract applies to this part.
inline std::string body(const harness::SweepResult& result) {
  std::string out = kHeader;
  out += '\n';
  for (const auto& r : result.rows) {
    out += detail::format_row(r);
    out += '\n';
  }
  return out;
}

inline void write(std::ostream& out, const harness::SweepResult& result, bool with_timestamp = true) {
  out << "# osem sweep result\n";
  if (with_timestamp) out << "# generated: " << detail::timestamp_utc() << "\n";
  out << "# columns: " << kHeader << "\n";
  out << "# rmse rows use the bits column for the estimate count; rmse_phase is in radians\n";
  out << "# spec:\n";
  std::istringstream spec_lines(config::serialize(result.spec));
  std::string line;
  while (std::getline(spec_lines, line)) out << "#   " << line << "\n";
  for (const auto& r : result.rows) {
    if (!r.note.empty())
      out << "# failed: axis=" << detail::format_double(r.axis) << " " << r.note << "\n";
    else if (r.truncated)
      out << "# truncated: axis=" << detail::format_double(r.axis) << "\n";
  }
  out << body(result);
}

inline void write_file(const std::string& path, const harness::SweepResult& result,
                       bool with_timestamp = true) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open " + path + " for writing");
  write(out, result, with_timestamp);
  if (!out) throw std::runtime_error("csv: write failed for " + path);
}

// Reads rows back; comments and the spec echo are skipped.
inline std::vector<harness::SweepRow> parse(std::istream& in) {
  std::vector<harness::SweepRow> rows;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != kHeader) throw std::runtime_error("csv: unexpected header: " + line);
      saw_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    while (fields.size() < 7) fields.emplace_back();
    if (fields.size() != 7) throw std::runtime_error("csv: malformed row: " + line);
    harness::SweepRow r;
    r.axis = std::stod(fields[0]);
    if (!fields[1].empty()) r.errors = std::stoull(fields[1]);
    if (!fields[2].empty()) r.bits = std::stoull(fields[2]);
    if (!fields[3].empty()) r.ber = std::stod(fields[3]);
    if (!fields[4].empty()) r.rmse_amp = std::stod(fields[4]);
    if (!fields[5].empty()) r.rmse_phase = std::stod(fields[5]);
    r.seed = std::stoull(fields[6]);
    rows.push_back(std::move(r));
  }
  if (!saw_header) throw std::runtime_error("csv: missing header");
  return rows;
}

inline std::vector<harness::SweepRow> parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path);
  return parse(in);
}

struct PlotSeries {
  std::string label;
  std::string csv_path;
  int y_column = 4;  // 1-based; 4 = ber, 5 = rmse_amp
};

// gnuplot script referencing the CSVs next to it.
inline void emit_plot_script(std::ostream& out, const std::string& title, const std::string& xlabel,
                             const std::string& ylabel, bool log_x, bool log_y,
                             const std::vector<PlotSeries>& series, const std::string& svg_path) {
  out << "# gnuplot script\n";
  out << "set datafile separator ','\n";
  out << "set title '" << title << "'\n";
  out << "set xlabel '" << xlabel << "'\n";
  out << "set ylabel '" << ylabel << "'\n";
  if (log_x) out << "set logscale x\n";
  if (log_y) out << "set logscale y\n";
  out << "set grid\n";
  out << "set key outside right\n";
  out << "set terminal svg size 900,600\n";
  out << "set output '" << svg_path << "'\n";
  out << "plot \\\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << "  '" << series[i].csv_path << "' using 1:" << series[i].y_column
        << " with linespoints title '" << series[i].label << "'";
    out << (i + 1 < series.size() ? ", \\\n" : "\n");
  }
}

inline void emit_plot_script_file(const std::string& path, const std::string& title,
                                  const std::string& xlabel, const std::string& ylabel, bool log_x,
                                  bool log_y, const std::vector<PlotSeries>& series,
                                  const std::string& svg_path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open " + path + " for writing");
  emit_plot_script(out, title, xlabel, ylabel, log_x, log_y, series, svg_path);
}

}  // namespace osem::csv
