#pragma once

// Plasmonic response of a Drude metal sphere: local multipole parameters and
// their size-dependent (hydrodynamic) corrections.

#include <string>
#include <string_view>
#include <vector>

#include "mnpq/numerics.hpp"

namespace mnpq {

/// Drude metal embedded in a dielectric host. SI units throughout.
struct MaterialParams {
  double plasma_frequency = 0.0;  // omega_p, rad/s
  double damping = 0.0;           // gamma_p, rad/s
  double eps_inf = 1.0;           // high-frequency dielectric constant
  double fermi_velocity = 0.0;    // v_F, m/s
  double eps_host = 1.0;          // eps_b

  /// Convective (pressure) velocity sqrt(3/5) v_F.
  double beta() const;
  /// Electron diffusion constant 4 gamma_p v_F^2 / (15 (omega^2 + gamma_p^2)), m^2/s.
  double diffusion(double omega) const;

  void validate() const;
};

/// Named presets. Known: "silver-drude".
MaterialParams material_preset(std::string_view name);
std::vector<std::string> material_preset_names();

struct SystemGeometry {
  double radius = 0.0;     // MNP radius r, m
  double qd_radius = 0.0;  // r_0, m
  double gap = 0.0;        // surface-to-surface distance s, m

  /// Centre-to-centre distance d = r_0 + s + r.
  double center_distance() const { return qd_radius + gap + radius; }
  void validate() const;
};

enum class ResponseKind { local, nonlocal };
std::string_view to_string(ResponseKind k);

/// What to do when Re(1 + Delta_l) < 0, where the square-root correction of
/// the coupling has no real value.
enum class InvalidCorrectionPolicy {
  error,     // throw DomainError
  suppress,  // keep the mode with zero coupling and flag it
};

struct PlasmonMode {
  int l = 1;
  double omega = 0.0;       // resonance, rad/s
  double gamma_nr = 0.0;    // non-radiative damping, rad/s
  double gamma_r = 0.0;     // radiative damping (l = 1 only), rad/s
  double gamma = 0.0;       // gamma_nr + gamma_r
  double coupling = 0.0;    // QD-mode coupling g_l, rad/s
  double eta = 0.0;         // mode normalisation eta_l, rad/s
  cplx nonlocal_correction{0.0, 0.0};  // Delta_l
  ResponseKind kind = ResponseKind::local;
  bool suppressed = false;  // coupling zeroed by InvalidCorrectionPolicy::suppress
};

struct DipoleMomentResult {
  double chi = 0.0;        // C*m
  double chi_local = 0.0;  // C*m
};

cplx drude_permittivity(const MaterialParams& mat, double omega);

/// Longitudinal wavevector k_L (1/m), branch with Im k_L >= 0.
cplx longitudinal_wavevector(const MaterialParams& mat, double omega);

/// Delta_l = l(l+1) (eps - eps_inf)/eps_inf * j_l(k_L r) / (k_L r j_l'(k_L r)).
cplx nonlocal_correction(const MaterialParams& mat, int l, double omega, double radius);

double local_mode_frequency(const MaterialParams& mat, int l);
double local_damping(const MaterialParams& mat, int l);

/// eta_l = (1/(2 omega_l^L)) (l omega_p / (l eps_inf + (l+1) eps_b))^2.
double mode_normalization(const MaterialParams& mat, int l);

double local_coupling(const MaterialParams& mat, const SystemGeometry& geom, int l, double mu);
double local_dipole_moment(const MaterialParams& mat, double radius);

struct ModeOptions {
  InvalidCorrectionPolicy invalid_correction = InvalidCorrectionPolicy::error;
};

/// Multipole mode l with the additive resonance/damping shifts and the
/// Delta_l coupling correction applied for ResponseKind::nonlocal. Delta_l and
/// the diffusion constant are evaluated at omega_drive. gamma_r is left at 0.
PlasmonMode corrected_mode(const MaterialParams& mat, const SystemGeometry& geom, int l,
                           double omega_drive, double mu, ResponseKind kind,
                           const ModeOptions& opts = {});

/// Dipolar resonance omega_1 for the chosen response (no Delta dependence).
double dipolar_resonance(const MaterialParams& mat, double radius, ResponseKind kind);

DipoleMomentResult dipole_moment(const MaterialParams& mat, double radius, double omega_drive,
                                 ResponseKind kind);

/// gamma_1^r = chi^2 sqrt(eps_b) omega_1^3 / (3 pi eps_0 hbar c^3).
double radiative_decay(double chi, double omega1, double eps_host);

/// Field amplitude E_0 = sqrt(2 I / (c n eps_0)), n = sqrt(eps_b); I in W/m^2.
double drive_field_amplitude(double intensity, double eps_host);

/// Omega = E_0 chi / (2 hbar).
double excitation_rate(double intensity, double chi, double eps_host);

}  // namespace mnpq
