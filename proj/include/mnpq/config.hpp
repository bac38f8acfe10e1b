#pragma once

// Run configuration: INI-style sections with unit-suffixed values.
//
//   [material]  preset, plasma_frequency, damping, eps_inf, fermi_velocity, eps_host
//   [geometry]  radius, qd_radius, gap, gap_start, gap_stop, gap_points,
//               radius_start, radius_stop, radius_points
//   [drive]     intensity, frequency ("resonant" or a frequency)
//   [qubits]    decay_rate, detuning_fraction, initial_state (gg | eg)
//   [run]       analysis, multipoles, response, radiative_damping, invalid_mode,
//               engine, time_start, time_stop, time_points, rel_tol, abs_tol,
//               workers, output
//
// Lengths take nm or m, frequencies eV or rad/s, intensities W/cm2 or W/m2,
// times ns, ps, s or tau (multiples of 1/gamma_a).

#include <string>
#include <utility>
#include <vector>

#include "mnpq/lindblad.hpp"

namespace mnpq {

enum class Analysis { dipole, multipole, both };
enum class InitialState { gg, eg };

std::string_view to_string(Analysis a);
std::string_view to_string(InitialState s);

struct Range {
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 0;
  std::vector<double> values() const;
};

/// A time either in seconds or in units of 1/gamma_a.
struct TimeValue {
  double value = 0.0;
  bool relative = true;
  double seconds(double gamma_a) const { return relative ? value / gamma_a : value; }
};

struct RunConfig {
  std::string material_name = "silver-drude";
  PhysicalSetup setup;          // material, single-point geometry, drive, qubits
  Range gap_range;
  Range radius_range;
  Analysis analysis = Analysis::both;
  InitialState initial_state = InitialState::gg;
  Engine engine = Engine::superoperator;
  TimeValue time_start{1e-4, true};
  TimeValue time_stop{50.0, true};
  std::size_t time_points = 400;
  OdeOptions ode;
  unsigned workers = 0;         // 0 = hardware concurrency
  std::string output = "mnpq_out";

  RunConfig();

  /// Multipole count used for the multipole analysis.
  int multipoles() const { return setup.multipoles; }
  DensityMatrix initial_density() const;
  std::vector<double> time_samples(double gamma_a) const;
  /// PhysicalSetup for one analysis variant at the given geometry.
  PhysicalSetup setup_for(int multipoles, double radius, double gap) const;
};

using Override = std::pair<std::string, std::string>;  // "section.key", value

/// Parse configuration text, then apply overrides. Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::vector<Override>& overrides = {});

/// Parse "section.key=value".
Override parse_override(const std::string& arg);

/// Fully resolved configuration as canonical JSON text (keys sorted, worker
/// count excluded so that it does not affect outputs).
std::string resolved_config_json(const RunConfig& cfg);

/// 64-bit FNV-1a of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Worker count after the MNPQ_WORKERS environment override.
unsigned effective_workers(const RunConfig& cfg);

}  // namespace mnpq
