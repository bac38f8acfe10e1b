#include <cmath>
#include <random>

#include "doctest.h"
#include "mnpq/errors.hpp"
#include "mnpq/material.hpp"
#include "mnpq/units.hpp"

using namespace mnpq;

namespace {

const MaterialParams silver = material_preset("silver-drude");

SystemGeometry geometry(double r_nm, double s_nm) {
  return {units::nm(r_nm), units::nm(0.8), units::nm(s_nm)};
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

const double mu = units::elementary_charge * units::nm(0.8);

}  // namespace

TEST_SUITE("material_response") {

TEST_CASE("silver dipolar resonance wavelengths") {
  const double r = units::nm(30);
  const double lam_local = units::wavelength_of(dipolar_resonance(silver, r, ResponseKind::local));
  const double lam_nonlocal = units::wavelength_of(dipolar_resonance(silver, r, ResponseKind::nonlocal));
  CHECK(units::to_nm(lam_local) == doctest::Approx(481.11556621171655).epsilon(1e-12));
  CHECK(units::to_nm(lam_nonlocal) == doctest::Approx(478.01710228043316).epsilon(1e-12));

  const double shift = dipolar_resonance(silver, r, ResponseKind::nonlocal) - local_mode_frequency(silver, 1);
  CHECK(units::rad_per_s_to_ev(shift) == doctest::Approx(0.0167).epsilon(0.01));
}

TEST_CASE("drude permittivity and longitudinal wavevector") {
  const double w = units::ev_to_rad_per_s(2.0);
  const cplx e = drude_permittivity(silver, w);
  const double wp = silver.plasma_frequency, gp = silver.damping;
  CHECK(std::abs(e - (silver.eps_inf - wp * wp / (w * cplx{w, gp}))) < 1e-12);

  const double wd = dipolar_resonance(silver, units::nm(30), ResponseKind::nonlocal);
  const cplx k = longitudinal_wavevector(silver, wd);
  CHECK(k.imag() >= 0.0);
  CHECK(k.real() == doctest::Approx(5621633.558728095).epsilon(1e-9));
  CHECK(k.imag() == doctest::Approx(3961889456.2826).epsilon(1e-12));

  const double w2 = units::ev_to_rad_per_s(2.577);
  const double approx = w2 * std::sqrt(std::abs(drude_permittivity(silver, w2) / silver.eps_inf)) / silver.beta();
  CHECK(std::abs(longitudinal_wavevector(silver, w2)) == doctest::Approx(approx).epsilon(0.01));
  CHECK(std::abs(longitudinal_wavevector(silver, w2)) > 1e9);
  CHECK(std::abs(longitudinal_wavevector(silver, w2)) < 1e10);

  // convective-only limit
  MaterialParams lossless = silver;
  lossless.damping = 0.0;
  const cplx k0 = longitudinal_wavevector(lossless, w2);
  const cplx expect = w2 / lossless.beta() * std::sqrt(drude_permittivity(lossless, w2) / lossless.eps_inf);
  CHECK(std::abs(k0 - (expect.imag() < 0 ? -expect : expect)) < 1e-9 * std::abs(expect));

  // eps = 0
  const double w_zero = lossless.plasma_frequency / std::sqrt(lossless.eps_inf);
  CHECK(std::abs(longitudinal_wavevector(lossless, w_zero)) < 1e-6 * std::abs(k0));
}

TEST_CASE("nonlocal correction reference values") {
  const double r = units::nm(30);
  const double wd = dipolar_resonance(silver, r, ResponseKind::nonlocal);
  const cplx d1 = nonlocal_correction(silver, 1, wd, r);
  const cplx d3 = nonlocal_correction(silver, 3, wd, r);
  CHECK(std::abs(d1 - cplx{-0.03685182014226893, 0.0002030176639822871}) < 1e-14);
  CHECK(std::abs(d3 - cplx{-0.22103137934267286, 0.0012178952858603019}) < 1e-13);
  CHECK(std::abs(nonlocal_correction(silver, 1, wd, 1e-3)) < 1e-3);

  double prev = 1e300;
  for (double rr : {units::nm(5), units::nm(30), units::nm(300), 1e-6, 1e-4}) {
    const double m = std::abs(nonlocal_correction(silver, 2, wd, rr));
    CHECK(m < prev);
    prev = m;
  }
}

TEST_CASE("local mode frequency and damping") {
  const double inf = std::sqrt(silver.plasma_frequency * silver.plasma_frequency /
                                   (silver.eps_inf + silver.eps_host) -
                               silver.damping * silver.damping);
  CHECK(local_mode_frequency(silver, 60) < inf);
  CHECK(rel(local_mode_frequency(silver, 60), inf) < 1e-2);
  CHECK(rel(local_damping(silver, 1), silver.damping) < 1e-4);

  const double w1 = local_mode_frequency(silver, 1);
  CHECK(local_damping(silver, 1) == doctest::Approx(silver.damping * (1 + std::pow(silver.damping / w1, 2))));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    MaterialParams p;
    p.plasma_frequency = units::ev_to_rad_per_s(3.0 + 10.0 * u(rng));
    p.damping = units::ev_to_rad_per_s(0.005 + 0.2 * u(rng));
    p.eps_inf = 1.0 + 9.0 * u(rng);
    p.fermi_velocity = 0.5e6 + 1.5e6 * u(rng);
    p.eps_host = 1.0 + 5.0 * u(rng);
    double prev = 0.0, prev_damp = 1e300;
    for (int l = 1; l <= 20; ++l) {
      const double w = local_mode_frequency(p, l);
      CHECK(w > prev);
      const double g = local_damping(p, l);
      CHECK(g >= p.damping);
      CHECK(g < prev_damp);
      prev = w;
      prev_damp = g;
    }
  }
}

TEST_CASE("coupling and dipole moment scaling") {
  const auto g = geometry(30, 30);
  const double g1 = local_coupling(silver, g, 1, mu);
  CHECK(local_coupling(silver, g, 1, 2.0 * mu) == doctest::Approx(2.0 * g1).epsilon(1e-14));

  // d^{-(l+2)} at fixed r: doubling d costs 2^{l+2}
  SystemGeometry far = g;
  far.gap = 2.0 * g.center_distance() - g.radius - g.qd_radius;
  CHECK(local_coupling(silver, far, 2, mu) ==
        doctest::Approx(local_coupling(silver, g, 2, mu) / 16.0).epsilon(1e-12));

  const double c = local_dipole_moment(silver, units::nm(30));
  CHECK(local_dipole_moment(silver, units::nm(60)) == doctest::Approx(c * std::pow(2.0, 1.5)).epsilon(1e-13));
  CHECK(local_dipole_moment(silver, 1e-15) ==
        doctest::Approx(c * std::pow(1e-15 / units::nm(30), 1.5)).epsilon(1e-12));

  const double wd = dipolar_resonance(silver, units::nm(30), ResponseKind::nonlocal);
  const auto dm = dipole_moment(silver, units::nm(30), wd, ResponseKind::nonlocal);
  CHECK(dm.chi == doctest::Approx(3.829151332543224e-26).epsilon(1e-13));
  CHECK(dm.chi_local == doctest::Approx(c).epsilon(1e-15));
}

TEST_CASE("corrected mode reference values") {
  const auto g = geometry(30, 30);
  const double wd = dipolar_resonance(silver, g.radius, ResponseKind::nonlocal);
  const auto m = corrected_mode(silver, g, 1, wd, mu, ResponseKind::nonlocal);
  CHECK(m.coupling == doctest::Approx(1240698221410.5051).epsilon(1e-13));
  CHECK(m.gamma_nr == doctest::Approx(27497064033973.293).epsilon(1e-13));
  CHECK(m.gamma_r == 0.0);
  CHECK(m.gamma == m.gamma_nr);
  CHECK_FALSE(m.suppressed);
}

TEST_CASE("local response reproduces the local formulas exactly") {
  for (int l = 1; l <= 10; ++l) {
    const auto g = geometry(12.0 + l, 7.0);
    const auto m = corrected_mode(silver, g, l, 4e15, mu, ResponseKind::local);
    CHECK(m.omega == local_mode_frequency(silver, l));
    CHECK(m.gamma_nr == local_damping(silver, l));
    CHECK(m.coupling == local_coupling(silver, g, l, mu));
    CHECK(m.eta == mode_normalization(silver, l));
    CHECK(m.nonlocal_correction == cplx{0.0, 0.0});
  }
}

TEST_CASE("nonlocal shifts are non-negative and vanish for large particles") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> radius(5.0, 200.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = geometry(radius(rng), 20.0);
    const double wd = dipolar_resonance(silver, g.radius, ResponseKind::nonlocal);
    for (int l = 1; l <= 6; ++l) {
      const auto a = corrected_mode(silver, g, l, wd, mu, ResponseKind::local);
      const auto b = corrected_mode(silver, g, l, wd, mu, ResponseKind::nonlocal, {InvalidCorrectionPolicy::suppress});
      CHECK(b.omega > a.omega);
      CHECK(b.gamma_nr > a.gamma_nr);
    }
  }

  // dipole: indistinguishable at 1 mm; higher orders approach as 1/r
  auto deviation = [](int l, double r) {
    SystemGeometry g{r, units::nm(0.8), units::nm(30)};
    const double wd = dipolar_resonance(silver, r, ResponseKind::local);
    const auto a = corrected_mode(silver, g, l, wd, mu, ResponseKind::local);
    const auto b = corrected_mode(silver, g, l, wd, mu, ResponseKind::nonlocal);
    return std::max({rel(b.omega, a.omega), rel(b.gamma_nr, a.gamma_nr), rel(b.coupling, a.coupling)});
  };
  CHECK(deviation(1, 1e-3) < 1e-6);
  for (int l : {2, 4, 8}) CHECK(deviation(l, 1e-3) / deviation(l, 1e-4) == doctest::Approx(0.1).epsilon(0.01));
}

TEST_CASE("invalid coupling correction policies") {
  const auto g = geometry(30, 30);
  const double wd = dipolar_resonance(silver, g.radius, ResponseKind::nonlocal);
  CHECK(1.0 + nonlocal_correction(silver, 8, wd, g.radius).real() < 0.0);
  CHECK_THROWS_AS(corrected_mode(silver, g, 8, wd, mu, ResponseKind::nonlocal), DomainError);
  const auto m = corrected_mode(silver, g, 8, wd, mu, ResponseKind::nonlocal, {InvalidCorrectionPolicy::suppress});
  CHECK(m.suppressed);
  CHECK(m.coupling == 0.0);
  CHECK(m.omega > 0.0);
}

TEST_CASE("radiative decay and excitation rate") {
  const double chi = 3.8e-26, w = 3.9e15;
  CHECK(radiative_decay(2.0 * chi, w, 3.0) == doctest::Approx(4.0 * radiative_decay(chi, w, 3.0)));
  CHECK(radiative_decay(chi, 2.0 * w, 3.0) == doctest::Approx(8.0 * radiative_decay(chi, w, 3.0)));
  const double expect = chi * chi * std::sqrt(3.0) * w * w * w /
                        (3.0 * units::pi * units::vacuum_permittivity * units::hbar *
                         std::pow(units::speed_of_light, 3));
  CHECK(radiative_decay(chi, w, 3.0) == doctest::Approx(expect).epsilon(1e-14));

  CHECK(excitation_rate(4e5, chi, 3.0) == doctest::Approx(2.0 * excitation_rate(1e5, chi, 3.0)));
  CHECK(excitation_rate(1e5, chi, 3.0) ==
        doctest::Approx(drive_field_amplitude(1e5, 3.0) * chi / (2.0 * units::hbar)));
  CHECK(drive_field_amplitude(1e5, 1.0) ==
        doctest::Approx(std::sqrt(2e5 / (units::speed_of_light * units::vacuum_permittivity))));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(material_preset("gold-magic"), DomainError);
  MaterialParams m = silver;
  m.plasma_frequency = -1.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
  CHECK_THROWS_AS(geometry(-1, 30).validate(), DomainError);
  CHECK_THROWS_AS(geometry(30, 0).validate(), DomainError);
}

}  // TEST_SUITE
