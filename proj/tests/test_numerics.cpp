#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mnpq/errors.hpp"
#include "mnpq/numerics.hpp"
#include "support.hpp"

using namespace mnpq;

TEST_SUITE("numerics") {

TEST_CASE("hermitian_eig small examples") {
  ComplexMatrix m(2, {cplx{2, 0}, cplx{0, 1}, cplx{0, -1}, cplx{2, 0}});
  const auto e = hermitian_eig(m);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-13));

  const auto z = hermitian_eig(ComplexMatrix(4));
  for (double v : z.values) CHECK(v == 0.0);

  ComplexMatrix bad(2, {cplx{1, 0}, cplx{1, 0}, cplx{0, 0}, cplx{1, 0}});
  CHECK_THROWS_AS(hermitian_eig(bad), DomainError);
}

TEST_CASE("hermitian_eig reconstructs, sums to trace and is unitarily invariant") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 15;
    const auto h = test::random_hermitian(rng, n);
    const auto e = hermitian_eig(h);
    double sum = 0.0;
    for (double v : e.values) sum += v;
    CHECK(std::abs(sum - h.trace().real()) <= 1e-10 * std::max(1.0, std::abs(h.trace().real())));

    const auto rebuilt = e.vectors * ComplexMatrix::diagonal(e.values) * e.vectors.adjoint();
    CHECK(test::max_diff(rebuilt, h) < 1e-11 * std::max(1.0, h.max_abs()));

    const auto u = test::random_unitary(rng, n);
    const auto e2 = hermitian_eig(u * h * u.adjoint());
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(e2.values[k] - e.values[k]) < 1e-9);
  }
}

TEST_CASE("hermitian_sqrt squares back and rejects negative input") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = test::random_density(rng, 4 + trial % 5);
    const auto s = hermitian_sqrt(m);
    CHECK(test::max_diff(s * s, m) < 1e-12);
  }
  ComplexMatrix neg = ComplexMatrix::identity(2);
  neg(1, 1) = -1e-3;
  CHECK_THROWS_AS(hermitian_sqrt(neg), NumericalError);
  // within the clamp window
  neg(1, 1) = -1e-11;
  CHECK(hermitian_sqrt(neg)(1, 1) == cplx{0.0, 0.0});
}

TEST_CASE("solve_linear") {
  const std::vector<cplx> b{cplx{1, 2}, cplx{3, -1}};
  const auto x = solve_linear(ComplexMatrix::identity(2), b);
  CHECK(x[0] == b[0]);
  CHECK(x[1] == b[1]);

  const std::vector<double> d{2.0, 4.0};
  const auto y = solve_linear(ComplexMatrix::diagonal(d), std::vector<cplx>{2.0, 4.0});
  CHECK(std::abs(y[0] - 1.0) < 1e-15);
  CHECK(std::abs(y[1] - 1.0) < 1e-15);

  ComplexMatrix sing(2, {cplx{1, 0}, cplx{2, 0}, cplx{2, 0}, cplx{4, 0}});
  CHECK_THROWS_AS(solve_linear(sing, b), NumericalError);
  CHECK_THROWS_AS(solve_linear(sing, std::vector<cplx>{1.0}), DomainError);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 16;
    auto a = test::random_matrix(rng, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 8.0;
    const auto sv = singular_values(a);
    if (sv.front() / sv.back() > 1e6) continue;
    std::vector<cplx> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = cplx{std::sin(1.0 + i), std::cos(2.0 * i)};
    const auto sol = solve_linear(a, rhs);
    const auto ax = multiply(a, sol);
    double res = 0.0, xn = 0.0, bn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      res = std::max(res, std::abs(ax[i] - rhs[i]));
      xn = std::max(xn, std::abs(sol[i]));
      bn = std::max(bn, std::abs(rhs[i]));
    }
    CHECK(res <= 1e-9 * (a.max_abs() * xn + bn));
  }
}

TEST_CASE("singular_values") {
  const std::vector<double> d{3.0, -5.0, 1.0};
  const auto sv = singular_values(ComplexMatrix::diagonal(d));
  CHECK(sv[0] == doctest::Approx(5.0));
  CHECK(sv[1] == doctest::Approx(3.0));
  CHECK(sv[2] == doctest::Approx(1.0));

  std::mt19937_64 rng(9);
  const auto u = test::random_unitary(rng, 6);
  const std::vector<double> s{6, 5, 4, 3, 2, 1e-3};
  const auto sv2 = singular_values(u * ComplexMatrix::diagonal(s));
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(std::abs(sv2[k] - s[k]) < 1e-12);
}

TEST_CASE("expm") {
  const std::vector<double> d{-1.0, 0.5, 2.0};
  const auto e = expm(ComplexMatrix::diagonal(d));
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(e(k, k) - std::exp(d[k])) < 1e-14 * std::exp(2.0));

  std::mt19937_64 rng(4);
  const auto h = test::random_hermitian(rng, 5) * cplx{30.0, 0.0};
  const auto u = expm(h * cplx{0.0, 1.0});
  CHECK(test::max_diff(u * u.adjoint(), ComplexMatrix::identity(5)) < 1e-11);
  const auto eig = hermitian_eig(h);
  ComplexMatrix phases(5);
  for (std::size_t k = 0; k < 5; ++k) phases(k, k) = std::exp(cplx{0.0, eig.values[k]});
  CHECK(test::max_diff(u, eig.vectors * phases * eig.vectors.adjoint()) < 1e-10);
}

namespace {

// y' = A y with A = V diag(-k1, -k2) V^{-1}, V = [[1, 1], [0, 1]]
constexpr double k1 = 1e9, k2 = 1e12;

std::vector<cplx> two_rate_exact(double t, const std::vector<cplx>& y0) {
  const cplx c2 = y0[1];
  const cplx c1 = y0[0] - y0[1];
  return {c1 * std::exp(-k1 * t) + c2 * std::exp(-k2 * t), c2 * std::exp(-k2 * t)};
}

void two_rate_rhs(double, std::span<const cplx> y, std::span<cplx> dy) {
  // A = [[-k1, k1 - k2], [0, -k2]]
  dy[0] = -k1 * y[0] + (k1 - k2) * y[1];
  dy[1] = -k2 * y[1];
}

}  // namespace

TEST_CASE("integrate_adaptive scalar examples") {
  const std::vector<double> ts{0.25, 0.5, 1.0};
  const std::vector<cplx> y0{1.0};
  const auto sol = integrate_adaptive([](double, std::span<const cplx> y, std::span<cplx> dy) { dy[0] = -y[0]; },
                                      y0, 0.0, ts);
  REQUIRE(sol.times.size() == 3);
  CHECK(sol.times[2] == 1.0);
  CHECK(std::abs(sol.states[2][0] - std::exp(-1.0)) < 1e-8);

  auto spin = [](double w) {
    return [w](double, std::span<const cplx> y, std::span<cplx> dy) { dy[0] = cplx{0.0, w} * y[0]; };
  };
  const auto rot = integrate_adaptive(spin(1.0), y0, 0.0, std::vector<double>{1.0, 2.0 * std::numbers::pi});
  for (const auto& s : rot.states) CHECK(std::abs(std::abs(s[0]) - 1.0) < 1e-8);
  OdeOptions tight;
  tight.rel_tol = 1e-11;
  const auto fast = integrate_adaptive(spin(7.0), y0, 0.0, std::vector<double>{1.0, 5.0, 10.0}, tight);
  for (const auto& s : fast.states) CHECK(std::abs(std::abs(s[0]) - 1.0) < 1e-8);

  CHECK_THROWS_AS(integrate_adaptive(two_rate_rhs, y0, 0.0, std::vector<double>{0.5, 0.25}), DomainError);
}

TEST_CASE("integrate_adaptive two-rate system against the propagator") {
  const std::vector<cplx> y0{cplx{1.0, 0.5}, cplx{-0.3, 0.2}};
  std::vector<double> ts;
  for (int k = 0; k <= 40; ++k) ts.push_back(1e-13 * std::pow(10.0, k * 5.0 / 40.0));
  const auto sol = integrate_adaptive(two_rate_rhs, y0, 0.0, ts);
  double worst = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto ex = two_rate_exact(ts[k], y0);
    for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(sol.states[k][i] - ex[i]));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("integrate_adaptive error does not grow when rel_tol is halved") {
  const std::vector<cplx> y0{cplx{1.0, 0.5}, cplx{-0.3, 0.2}};
  const std::vector<double> ts{2e-9};
  const auto ex = two_rate_exact(ts[0], y0);
  double prev = 1e300;
  for (double tol = 1e-3; tol > 1e-10; tol *= 0.5) {
    OdeOptions o;
    o.rel_tol = tol;
    o.abs_tol = 1e-16;
    const auto sol = integrate_adaptive(two_rate_rhs, y0, 0.0, ts, o);
    const double err = std::max(std::abs(sol.states[0][0] - ex[0]), std::abs(sol.states[0][1] - ex[1]));
    // below ~1e-14 the comparison is roundoff against roundoff
    CHECK(err <= std::max(prev, 1e-14));
    prev = err;
  }
}

TEST_CASE("integrate_adaptive reports stiffness") {
  const std::vector<cplx> y0{0.0};
  auto stiff = [](double, std::span<const cplx> y, std::span<cplx> dy) { dy[0] = -1e12 * (y[0] - 1.0); };
  CHECK_THROWS_AS(integrate_adaptive(stiff, y0, 0.0, std::vector<double>{1e-3}), StiffnessError);
}

TEST_CASE("bessel_log_ratio against high-precision references") {
  CHECK(std::abs(bessel_log_ratio(1, 1.0) - 1.2594158454760211) < 1e-13);

  const cplx big = bessel_log_ratio(1, cplx{0.0, 120.0});
  CHECK(std::abs(big) < 1.0);
  CHECK(std::abs(big - cplx{0.008402767970625618, 0.0}) < 1e-15);

  CHECK(std::abs(bessel_log_ratio(5, cplx{3.0, 2.0}) - cplx{0.2053624464227068, 0.04250044334929754}) < 1e-13);
  CHECK(std::abs(bessel_log_ratio(10, cplx{0.5, 40.0}) - cplx{0.024757971934148405, 0.00029601568949914046}) <
        1e-14);

  // j_1 ~ z/3 and z j_1' ~ z/3, so the ratio tends to 1 (next term z^2/5)
  const double z = 1e-3;
  CHECK(std::abs(bessel_log_ratio(1, z) - (1.0 + z * z / 5.0)) < 1e-10);

  // stays finite deep into the evanescent regime
  const cplx far = bessel_log_ratio(3, cplx{2.0, 4000.0});
  CHECK(std::isfinite(far.real()));
  CHECK(std::isfinite(far.imag()));

  CHECK_THROWS_AS(bessel_log_ratio(0, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_log_ratio(61, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_log_ratio(1, 0.0), DomainError);
}

TEST_CASE("bessel_log_derivative satisfies the downward recurrence") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> mag(0.1, 50.0), ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> order(2, 40);
  for (int trial = 0; trial < 500; ++trial) {
    const cplx z = std::polar(mag(rng), ang(rng));
    const int l = order(rng);
    const cplx dl = bessel_log_derivative(l, z);
    const cplx dm = bessel_log_derivative(l - 1, z);
    const cplx lhs = (dl + static_cast<double>(l + 1) / z) * (static_cast<double>(l - 1) / z - dm);
    CHECK(std::abs(lhs - 1.0) < 1e-10);
  }
}

}  // TEST_SUITE
