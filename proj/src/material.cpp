#include "mnpq/material.hpp"

#include <cmath>
#include <sstream>

#include "mnpq/units.hpp"

namespace mnpq {

using units::hbar;
using units::pi;
using units::vacuum_permittivity;

double MaterialParams::beta() const { return std::sqrt(3.0 / 5.0) * fermi_velocity; }

double MaterialParams::diffusion(double omega) const {
  return 4.0 * damping * fermi_velocity * fermi_velocity /
         (15.0 * (omega * omega + damping * damping));
}

void MaterialParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("MaterialParams: ") + what);
  };
  require(plasma_frequency > 0.0, "plasma frequency must be positive");
  require(damping > 0.0, "damping must be positive");
  require(fermi_velocity > 0.0, "Fermi velocity must be positive");
  require(eps_inf >= 1.0, "eps_inf must be >= 1");
  require(eps_host >= 1.0, "host dielectric constant must be >= 1");
}

MaterialParams material_preset(std::string_view name) {
  if (name == "silver-drude") {
    MaterialParams m;
    m.plasma_frequency = units::ev_to_rad_per_s(8.5472);
    m.damping = units::ev_to_rad_per_s(0.018);
    m.eps_inf = 5.0;
    m.fermi_velocity = 1.39e6;
    m.eps_host = 3.0;
    return m;
  }
  throw DomainError("unknown material preset '" + std::string(name) + "'");
}

std::vector<std::string> material_preset_names() { return {"silver-drude"}; }

void SystemGeometry::validate() const {
  if (!(radius > 0.0)) throw DomainError("geometry: MNP radius must be positive");
  if (!(qd_radius > 0.0)) throw DomainError("geometry: QD radius must be positive");
  if (!(gap > 0.0)) throw DomainError("geometry: surface gap must be positive");
}

std::string_view to_string(ResponseKind k) {
  return k == ResponseKind::local ? "local" : "nonlocal";
}

cplx drude_permittivity(const MaterialParams& mat, double omega) {
  if (!(omega > 0.0)) throw DomainError("drude_permittivity: frequency must be positive");
  const double wp2 = mat.plasma_frequency * mat.plasma_frequency;
  return mat.eps_inf - wp2 / (omega * cplx(omega, mat.damping));
}

cplx longitudinal_wavevector(const MaterialParams& mat, double omega) {
  if (!(omega > 0.0)) throw DomainError("longitudinal_wavevector: frequency must be positive");
  const cplx eps = drude_permittivity(mat, omega);
  const double b = mat.beta();
  const cplx denom = mat.eps_inf * (b * b + mat.diffusion(omega) * cplx(mat.damping, -omega));
  cplx k = std::sqrt(omega * cplx(omega, mat.damping) * eps / denom);
  if (k.imag() < 0.0) k = -k;
  return k;
}

cplx nonlocal_correction(const MaterialParams& mat, int l, double omega, double radius) {
  if (l < 1) throw DomainError("nonlocal_correction: multipole order must be >= 1");
  if (!(radius > 0.0)) throw DomainError("nonlocal_correction: radius must be positive");
  const cplx eps = drude_permittivity(mat, omega);
  const cplx z = longitudinal_wavevector(mat, omega) * radius;
  const double ll = static_cast<double>(l);
  return ll * (ll + 1.0) * (eps - mat.eps_inf) / mat.eps_inf * bessel_log_ratio(l, z);
}

double local_mode_frequency(const MaterialParams& mat, int l) {
  if (l < 1) throw DomainError("local_mode_frequency: multipole order must be >= 1");
  const double ll = static_cast<double>(l);
  const double wp2 = mat.plasma_frequency * mat.plasma_frequency;
  const double radicand =
      ll * wp2 / (ll * mat.eps_inf + (ll + 1.0) * mat.eps_host) - mat.damping * mat.damping;
  if (!(radicand > 0.0)) {
    std::ostringstream os;
    os << "local_mode_frequency: mode l = " << l << " is over-damped (radicand " << radicand << ")";
    throw DomainError(os.str());
  }
  return std::sqrt(radicand);
}

double local_damping(const MaterialParams& mat, int l) {
  const double ratio = mat.damping / local_mode_frequency(mat, l);
  return mat.damping * (1.0 + ratio * ratio);
}

double mode_normalization(const MaterialParams& mat, int l) {
  const double ll = static_cast<double>(l);
  const double f = ll * mat.plasma_frequency / (ll * mat.eps_inf + (ll + 1.0) * mat.eps_host);
  return f * f / (2.0 * local_mode_frequency(mat, l));
}

double local_coupling(const MaterialParams& mat, const SystemGeometry& geom, int l, double mu) {
  const double d = geom.center_distance();
  if (!(d > geom.radius)) {
    throw DomainError("local_coupling: quantum dot centre lies inside the nanoparticle");
  }
  const double ll = static_cast<double>(l);
  const double eta = mode_normalization(mat, l);
  const double r = geom.radius;
  const double root =
      std::sqrt((2.0 * ll + 1.0) * eta * std::pow(r, 2.0 * ll + 1.0) /
                (4.0 * pi * vacuum_permittivity * hbar * ll));
  return mu * (ll + 1.0) / std::pow(d, ll + 2.0) * root;
}

double local_dipole_moment(const MaterialParams& mat, double radius) {
  if (!(radius > 0.0)) throw DomainError("local_dipole_moment: radius must be positive");
  const double eta1 = mode_normalization(mat, 1);
  return mat.eps_host *
         std::sqrt(12.0 * pi * vacuum_permittivity * eta1 * radius * radius * radius * hbar);
}

double dipolar_resonance(const MaterialParams& mat, double radius, ResponseKind kind) {
  const double w = local_mode_frequency(mat, 1);
  if (kind == ResponseKind::local) return w;
  return w + std::sqrt(2.0) * mat.beta() / (2.0 * radius);
}

PlasmonMode corrected_mode(const MaterialParams& mat, const SystemGeometry& geom, int l,
                           double omega_drive, double mu, ResponseKind kind,
                           const ModeOptions& opts) {
  if (l < 1) throw DomainError("corrected_mode: multipole order must be >= 1");
  if (!(omega_drive > 0.0)) throw DomainError("corrected_mode: drive frequency must be positive");

  PlasmonMode m;
  m.l = l;
  m.kind = kind;
  m.omega = local_mode_frequency(mat, l);
  m.gamma_nr = local_damping(mat, l);
  m.eta = mode_normalization(mat, l);
  m.coupling = local_coupling(mat, geom, l, mu);

  if (kind == ResponseKind::nonlocal) {
    const double ll = static_cast<double>(l);
    const double r = geom.radius;
    const double b = mat.beta();
    m.omega += std::sqrt(ll * (ll + 1.0)) * b / (2.0 * r);
    m.gamma_nr += 0.5 * ll * std::sqrt((ll + 1.0) / (2.0 * ll + 1.0)) *
                  mat.diffusion(omega_drive) * mat.plasma_frequency / (b * r);
    m.nonlocal_correction = nonlocal_correction(mat, l, omega_drive, r);
    const double factor = 1.0 + m.nonlocal_correction.real();
    if (factor < 0.0) {
      if (opts.invalid_correction == InvalidCorrectionPolicy::error) {
        std::ostringstream os;
        os << "corrected_mode: Re(1 + Delta_" << l << ") = " << factor
           << " < 0 at r = " << units::to_nm(r) << " nm; the coupling correction is undefined";
        throw DomainError(os.str());
      }
      m.coupling = 0.0;
      m.suppressed = true;
    } else {
      m.coupling *= std::sqrt(factor);
    }
  }
  m.gamma = m.gamma_nr + m.gamma_r;
  return m;
}

DipoleMomentResult dipole_moment(const MaterialParams& mat, double radius, double omega_drive,
                                 ResponseKind kind) {
  DipoleMomentResult res;
  res.chi_local = local_dipole_moment(mat, radius);
  res.chi = res.chi_local;
  if (kind == ResponseKind::nonlocal) {
    const double factor = 1.0 + nonlocal_correction(mat, 1, omega_drive, radius).real();
    if (factor < 0.0) {
      throw DomainError("dipole_moment: Re(1 + Delta_1) < 0, dipole correction undefined");
    }
    res.chi *= std::sqrt(factor);
  }
  return res;
}

double radiative_decay(double chi, double omega1, double eps_host) {
  if (chi < 0.0 || !(omega1 > 0.0)) {
    throw DomainError("radiative_decay: dipole moment must be >= 0 and frequency > 0");
  }
  const double c = units::speed_of_light;
  return chi * chi * std::sqrt(eps_host) * omega1 * omega1 * omega1 /
         (3.0 * pi * vacuum_permittivity * hbar * c * c * c);
}

double drive_field_amplitude(double intensity, double eps_host) {
  if (intensity < 0.0) throw DomainError("drive intensity must be non-negative");
  return std::sqrt(2.0 * intensity /
                   (units::speed_of_light * std::sqrt(eps_host) * vacuum_permittivity));
}

double excitation_rate(double intensity, double chi, double eps_host) {
  return drive_field_amplitude(intensity, eps_host) * chi / (2.0 * hbar);
}

}  // namespace mnpq
