#pragma once

#include <numbers>

// Internally every frequency is angular (rad/s) and every time is in seconds,
// with hbar = 1. Ordinary frequencies f = omega / 2pi only appear at the I/O
// boundary, so these helpers are the only place a factor of 2pi shows up.
namespace holonomy::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double from_mhz(double f_mhz) { return kTwoPi * f_mhz * 1e6; }
constexpr double from_ghz(double f_ghz) { return kTwoPi * f_ghz * 1e9; }
constexpr double to_mhz(double omega) { return omega / (kTwoPi * 1e6); }
constexpr double to_ghz(double omega) { return omega / (kTwoPi * 1e9); }

constexpr double from_us(double t_us) { return t_us * 1e-6; }
constexpr double from_ps(double t_ps) { return t_ps * 1e-12; }
constexpr double to_us(double t) { return t * 1e6; }
constexpr double to_ps(double t) { return t * 1e12; }

}  // namespace holonomy::units
