#include <cmath>
#include <random>

#include "doctest.h"
#include "mnpq/effective_model.hpp"
#include "mnpq/errors.hpp"
#include "mnpq/metrics.hpp"
#include "mnpq/units.hpp"
#include "support.hpp"

using namespace mnpq;

namespace {

const double s2 = 1.0 / std::sqrt(2.0);

DensityMatrix werner(double p) {
  auto rho = test::outer({s2, 0.0, 0.0, s2}) * cplx{p, 0.0};
  rho += ComplexMatrix::identity(4) * cplx{(1.0 - p) / 4.0, 0.0};
  return rho;
}

std::vector<cplx> random_pure(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> psi(4);
  double n = 0.0;
  for (auto& c : psi) {
    c = {nd(rng), nd(rng)};
    n += std::norm(c);
  }
  for (auto& c : psi) c /= std::sqrt(n);
  return psi;
}

}  // namespace

TEST_SUITE("entanglement_metrics") {

TEST_CASE("concurrence of Bell and product states") {
  for (const auto& psi : std::vector<std::vector<cplx>>{
           {s2, 0.0, 0.0, s2}, {s2, 0.0, 0.0, -s2}, {0.0, s2, s2, 0.0}, {0.0, s2, -s2, 0.0}}) {
    CHECK(std::abs(concurrence(test::outer(psi)) - 1.0) < 1e-8);
  }
  for (int k = 0; k < 4; ++k) CHECK(concurrence(basis_projector(k)) < 1e-8);
  CHECK(concurrence(ComplexMatrix::identity(4) * cplx{0.25, 0.0}) < 1e-8);

  // product of two random single-qubit pure states
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    cplx a0{nd(rng), nd(rng)}, a1{nd(rng), nd(rng)}, b0{nd(rng), nd(rng)}, b1{nd(rng), nd(rng)};
    const double na = std::sqrt(std::norm(a0) + std::norm(a1)), nb = std::sqrt(std::norm(b0) + std::norm(b1));
    a0 /= na; a1 /= na; b0 /= nb; b1 /= nb;
    CHECK(concurrence(test::outer({a0 * b0, a0 * b1, a1 * b0, a1 * b1})) < 1e-7);
  }
}

TEST_CASE("concurrence closed forms") {
  for (double p = 0.0; p <= 1.0 + 1e-12; p += 0.05) {
    CHECK(std::abs(concurrence(werner(p)) - std::max(0.0, (3.0 * p - 1.0) / 2.0)) < 1e-8);
  }
  for (double th = 0.0; th < 1.6; th += 0.1) {
    const double a = std::cos(th), b = std::sin(th);
    CHECK(std::abs(concurrence(test::outer({a, 0.0, 0.0, cplx{0.0, b}})) - 2.0 * std::abs(a * b)) < 1e-8);
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto psi = random_pure(rng);
    const double c = 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
    CHECK(std::abs(concurrence(test::outer(psi)) - c) < 1e-7);
  }
}

TEST_CASE("concurrence is bounded and invariant under local phases") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rho = test::random_density(rng);
    const double c = concurrence(rho);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    const double a = 0.3 * trial, b = 1.1 * trial;
    ComplexMatrix u(4);
    u(0, 0) = 1.0;
    u(1, 1) = std::polar(1.0, b);
    u(2, 2) = std::polar(1.0, a);
    u(3, 3) = std::polar(1.0, a + b);
    CHECK(std::abs(concurrence(u * rho * u.adjoint()) - c) < 1e-9);
  }
  CHECK(spin_flip(werner(0.7)).hermiticity_error() < 1e-15);
  CHECK((spin_flip(werner(0.7)) - werner(0.7)).max_abs() < 1e-15);
}

TEST_CASE("concurrence rejects non-physical input") {
  DensityMatrix neg = ComplexMatrix::identity(4) * cplx{0.5, 0.0};
  neg(0, 0) = -0.5;
  CHECK_THROWS(concurrence(neg));
}

TEST_CASE("quantum Fisher information") {
  const auto h = relative_phase_generator();
  CHECK(h(1, 1) == cplx{-1.0, 0.0});
  CHECK(h(2, 2) == cplx{1.0, 0.0});

  CHECK(std::abs(qfi(ComplexMatrix::identity(4) * cplx{0.25, 0.0}, h)) < 1e-10);
  CHECK(std::abs(qfi(test::outer({0.0, s2, s2, 0.0}), h) - 4.0) < 1e-8);
  CHECK(std::abs(qfi(basis_projector(0), h)) < 1e-10);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto psi = random_pure(rng);
    CHECK(std::abs(qfi(test::outer(psi), h) - pure_state_variance_qfi(psi, h)) < 1e-8);
  }

  // convex in the state
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = test::random_density(rng), b = test::random_density(rng);
    const auto mix = a * cplx{0.5, 0.0} + b * cplx{0.5, 0.0};
    CHECK(qfi(mix, h) <= 0.5 * (qfi(a, h) + qfi(b, h)) + 1e-10);
  }
}

TEST_CASE("stationary metrics of the silver dipole system") {
  PhysicalSetup p;
  p.material = material_preset("silver-drude");
  p.geometry = {units::nm(30), units::nm(0.8), units::nm(30)};
  p.multipoles = 1;
  const auto ss = steady_state(assemble(p).effective);
  CHECK(concurrence(ss.rho) == doctest::Approx(0.840509052945848).epsilon(1e-9));
  CHECK(qfi(ss.rho, relative_phase_generator()) == doctest::Approx(3.284166739551711).epsilon(1e-9));
  p.multipoles = 10;
  const auto ss10 = steady_state(assemble(p).effective);
  CHECK(concurrence(ss10.rho) == doctest::Approx(0.8405479620419095).epsilon(1e-9));
  CHECK(qfi(ss10.rho, relative_phase_generator()) == doctest::Approx(3.2843285178973805).epsilon(1e-9));
}

}  // TEST_SUITE
