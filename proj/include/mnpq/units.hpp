#pragma once

// Physical constants (CODATA 2018 exact/recommended values) and the
// conversions accepted at the configuration boundary. Everything inside the
// library is strict SI: rad/s, m, C*m, W/m^2, s.

#include <numbers>

namespace mnpq::units {

inline constexpr double hbar = 1.054571817e-34;          // J*s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double speed_of_light = 299792458.0;    // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double pi = std::numbers::pi;

/// Angular frequency (rad/s) of a photon energy given in eV.
constexpr double ev_to_rad_per_s(double ev) { return ev * elementary_charge / hbar; }
constexpr double rad_per_s_to_ev(double w) { return w * hbar / elementary_charge; }

constexpr double nm(double v) { return v * 1e-9; }
constexpr double to_nm(double m) { return m * 1e9; }

/// W/cm^2 -> W/m^2.
constexpr double w_per_cm2(double v) { return v * 1e4; }

/// Vacuum wavelength (m) of an angular frequency.
constexpr double wavelength_of(double omega) { return 2.0 * pi * speed_of_light / omega; }

}  // namespace mnpq::units
