#pragma once

#include <numbers>

// Internal unit system: angular frequencies in rad/us, lengths in um,
// times in us. Conversions happen once, at the input boundary.
namespace rydgate::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// (2 pi) x value MHz  ->  rad/us
constexpr double from_2pi_mhz(double value_mhz) { return two_pi * value_mhz; }

// rad/us  ->  value in units of (2 pi) MHz
constexpr double to_2pi_mhz(double rad_per_us) { return rad_per_us / two_pi; }

// (2 pi) x value kHz  ->  rad/us
constexpr double from_2pi_khz(double value_khz) { return two_pi * value_khz * 1e-3; }

constexpr double ns_to_us(double ns) { return ns * 1e-3; }

// Spectral standard deviation for a pulse of duration T, using dw = 1/T.
double bandwidth_from_duration_ns(double duration_ns);

} // namespace rydgate::units
