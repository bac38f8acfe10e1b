#pragma once

// Adiabatic elimination of the plasmon modes: effective two-qubit rates and
// couplings, their Dicke-basis form, and assembly of a complete model from
// physical inputs.

#include <array>
#include <vector>

#include "mnpq/material.hpp"

namespace mnpq {

struct QubitParams {
  double dipole_moment = 0.0;      // mu, C*m
  double decay_rate = 0.0;         // spontaneous emission gamma, rad/s
  std::array<double, 2> frequency{};  // omega_1, omega_2, rad/s
  double detuning = 0.0;           // delta, rad/s

  /// Qubits at omega_pl +/- delta.
  static QubitParams antisymmetric(double mu, double gamma, double omega_pl, double delta);
};

struct EffectiveParams {
  std::array<cplx, 2> rabi{};        // Omega~_i, rad/s
  double exchange = 0.0;             // g~ (= g~_12 = g~_21), rad/s
  double cross_decay = 0.0;          // gamma~_12, rad/s
  std::array<double, 2> detuning{};  // Delta omega~_i, rad/s
  std::array<double, 2> decay{};     // gamma~_i, rad/s
  double drive_frequency = 0.0;      // rad/s
};

/// Contribution of a single multipole order to the mode sums.
struct ModeTerm {
  int l = 0;
  cplx rabi{};         // g_l i Omega delta_{1l} / delta_l
  double exchange = 0.0;     // Delta omega_l g_l^2 / |delta_l|^2
  double cross_decay = 0.0;  // gamma_l g_l^2 / |delta_l|^2
};

std::vector<ModeTerm> effective_terms(const std::vector<PlasmonMode>& modes, double rabi_mnp,
                                      double drive_frequency);

/// Sum of the mode terms with qubit detunings and spontaneous decay added.
/// Both qubits couple identically to every mode (centrally placed MNP).
EffectiveParams effective_parameters(const std::vector<PlasmonMode>& modes,
                                     const QubitParams& qubits, double rabi_mnp,
                                     double drive_frequency);

/// Increment of the last included order relative to the accumulated total,
/// per effective quantity (rabi, exchange, cross_decay).
struct ConvergenceReport {
  int order = 0;
  double rabi_increment = 0.0;
  double exchange_increment = 0.0;
  double cross_decay_increment = 0.0;
  double max_increment() const;
};
ConvergenceReport last_order_increment(const std::vector<ModeTerm>& terms);
/// Same, for the highest order with non-zero coupling.
ConvergenceReport highest_active_increment(const std::vector<ModeTerm>& terms);

struct DickeParams {
  cplx rabi_s{}, rabi_a{};
  double delta_s = 0.0, delta_a = 0.0;
  double delta_minus = 0.0, delta_plus = 0.0;
  double gamma_s = 0.0, gamma_a = 0.0;
};

DickeParams dicke_parameters(const EffectiveParams& eff);

/// Undriven Dicke-basis populations plus the s-a coherence.
struct DickePopulations {
  double ss = 0.0, aa = 0.0, gg = 0.0, ee = 0.0;
  cplx sa{};
};

struct DickeTrajectory {
  std::vector<double> times;
  std::vector<DickePopulations> states;
};

DickeTrajectory dicke_rate_evolution(const DickeParams& dicke, const DickePopulations& initial,
                                     const std::vector<double>& t_samples,
                                     const OdeOptions& opts = {});

// ---------------------------------------------------------------------------
// Assembly from physical inputs

enum class RadiativeDamping { neglect, include };
enum class DriveFrequencyMode { resonant, explicit_value };

struct PhysicalSetup {
  MaterialParams material;
  SystemGeometry geometry;
  int multipoles = 10;
  ResponseKind response = ResponseKind::nonlocal;
  double intensity = 1e5;                 // W/m^2
  DriveFrequencyMode drive_mode = DriveFrequencyMode::resonant;
  double drive_frequency = 0.0;           // rad/s, used with explicit_value
  double qubit_decay = 2.0 * 3.14159265358979323846 * 1e8;  // rad/s
  double detuning_fraction = 1e-5;        // delta / omega_pl
  RadiativeDamping radiative = RadiativeDamping::neglect;
  InvalidCorrectionPolicy invalid_correction = InvalidCorrectionPolicy::suppress;

  void validate() const;
};

struct SystemModel {
  std::vector<PlasmonMode> modes;
  DipoleMomentResult dipole;
  double omega_pl = 0.0;          // dipolar resonance of the chosen response
  double drive_frequency = 0.0;
  double rabi_mnp = 0.0;          // Omega, rad/s
  double radiative_rate = 0.0;    // gamma_1^r from the formula, included or not
  QubitParams qubits;
  std::vector<ModeTerm> terms;
  EffectiveParams effective;
  DickeParams dicke;

  /// Omega / gamma_1 with gamma_1 the total dipolar damping used in the model.
  double weak_excitation_ratio() const;
  int suppressed_modes() const;
};

SystemModel assemble(const PhysicalSetup& setup);

}  // namespace mnpq
