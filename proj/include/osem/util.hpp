#pragma once

#include <cmath>
#include <numbers>

namespace osem {

inline double wrap_two_pi(double x) {
  double y = std::fmod(x, 2.0 * std::numbers::pi);
  if (y < 0.0) y += 2.0 * std::numbers::pi;
  return y;
}

// Smallest signed angular difference, in (-pi, pi].
inline double wrap_pi(double x) {
  double y = std::fmod(x + std::numbers::pi, 2.0 * std::numbers::pi);
  if (y <= 0.0) y += 2.0 * std::numbers::pi;
  return y - std::numbers::pi;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

}  // namespace osem
