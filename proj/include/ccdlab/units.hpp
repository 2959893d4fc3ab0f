#pragma once

#include <numbers>

namespace ccdlab {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// All internal frequencies are angular (rad/s); the CLI speaks ordinary MHz
// and microseconds and converts at the boundary.
constexpr double mhz_to_rad(double f_mhz) { return two_pi * 1e6 * f_mhz; }
constexpr double rad_to_mhz(double w) { return w / (two_pi * 1e6); }
constexpr double us_to_s(double t_us) { return 1e-6 * t_us; }
constexpr double s_to_us(double t_s) { return 1e6 * t_s; }

}  // namespace ccdlab
