#include "mnpq/lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "mnpq/errors.hpp"

namespace mnpq {
namespace {

constexpr std::size_t kDim = 4;
constexpr std::size_t kVec = 16;
const cplx I(0.0, 1.0);

// The ten independently listed elements, zero-based (row, col).
constexpr std::array<std::array<int, 2>, 10> kElements{{
    {3, 3}, {2, 2}, {1, 1}, {0, 0}, {3, 0}, {3, 1}, {3, 2}, {0, 1}, {0, 2}, {1, 2}}};

std::string element_name(int i, int j) {
  return "rho_" + std::to_string(i + 1) + std::to_string(j + 1);
}

ComplexMatrix adjoint_product(const ComplexMatrix& a, const ComplexMatrix& b) { return a.adjoint() * b; }

// Unit-trace Hermitian matrix from 15 real parameters (see header).
DensityMatrix from_parameters(const std::array<double, 15>& p) {
  DensityMatrix rho(kDim);
  rho(1, 1) = p[0];
  rho(2, 2) = p[1];
  rho(3, 3) = p[2];
  rho(0, 0) = 1.0 - (p[0] + p[1] + p[2]);
  constexpr std::array<std::array<int, 2>, 6> upper{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  for (std::size_t k = 0; k < upper.size(); ++k) {
    const cplx v(p[3 + 2 * k], p[4 + 2 * k]);
    rho(upper[k][0], upper[k][1]) = v;
    rho(upper[k][1], upper[k][0]) = std::conj(v);
  }
  return rho;
}

std::string parameter_name(std::size_t k) {
  if (k < 3) return element_name(static_cast<int>(k + 1), static_cast<int>(k + 1));
  constexpr std::array<std::array<int, 2>, 6> upper{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  const auto& e = upper[(k - 3) / 2];
  return ((k - 3) % 2 == 0 ? "Re " : "Im ") + element_name(e[0], e[1]);
}

DensityMatrix apply(const ComplexMatrix& L, const DensityMatrix& rho) {
  return unvectorize(multiply(L, vectorize(rho)));
}

}  // namespace

ComplexMatrix lowering_operator(int qubit) {
  if (qubit != 0 && qubit != 1) throw DomainError("lowering_operator: qubit index must be 0 or 1");
  ComplexMatrix s(2);
  s(0, 1) = 1.0;
  const auto id = ComplexMatrix::identity(2);
  return qubit == 0 ? kron(s, id) : kron(id, s);
}

std::vector<cplx> vectorize(const DensityMatrix& rho) {
  const std::size_t n = rho.size();
  std::vector<cplx> v(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) v[i + n * j] = rho(i, j);
  return v;
}

DensityMatrix unvectorize(std::span<const cplx> v) {
  const auto n = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw DomainError("unvectorize: length is not a perfect square");
  DensityMatrix rho(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) rho(i, j) = v[i + n * j];
  return rho;
}

DensityMatrix basis_projector(int k) {
  if (k < 0 || k > 3) throw DomainError("basis_projector: index must be in 0..3");
  DensityMatrix p(kDim);
  p(k, k) = 1.0;
  return p;
}

ComplexMatrix effective_hamiltonian(const EffectiveParams& eff) {
  const std::array<ComplexMatrix, 2> s{lowering_operator(0), lowering_operator(1)};
  ComplexMatrix h(kDim);
  for (int i = 0; i < 2; ++i) {
    const auto sd = s[i].adjoint();
    h += (sd * s[i]) * cplx(eff.detuning[i]);
    h -= sd * eff.rabi[i] + s[i] * std::conj(eff.rabi[i]);
  }
  h -= (s[0].adjoint() * s[1] + s[1].adjoint() * s[0]) * cplx(eff.exchange);
  return h;
}

ComplexMatrix build_superoperator(const EffectiveParams& eff) {
  const auto h = effective_hamiltonian(eff);
  const auto id = ComplexMatrix::identity(kDim);
  // vec(A X B) = (B^T kron A) vec(X)
  ComplexMatrix L = (kron(id, h) - kron(h.transpose(), id)) * cplx(0.0, -1.0);

  const std::array<ComplexMatrix, 2> s{lowering_operator(0), lowering_operator(1)};
  const double rates[2][2] = {{eff.decay[0], eff.cross_decay}, {eff.cross_decay, eff.decay[1]}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double half = rates[i][j] / 2.0;
      if (half == 0.0) continue;
      const auto sdag_s = adjoint_product(s[i], s[j]);
      ComplexMatrix term = kron(s[i].conj(), s[j]) * cplx(2.0);
      term -= kron(id, sdag_s);
      term -= kron(sdag_s.transpose(), id);
      L += term * cplx(half);
    }
  }
  return L;
}

DensityMatrix rhs_explicit(const EffectiveParams& eff, const DensityMatrix& rho) {
  const cplx O = eff.rabi[0];
  const cplx Oc = std::conj(O);
  const double g = eff.exchange;
  const double G = eff.decay[0];
  const double G12 = eff.cross_decay;
  const double d1 = eff.detuning[0], d2 = eff.detuning[1];
  const double dp = d1 + d2, dm = d1 - d2;
  auto R = [&](int i, int j) { return rho(i - 1, j - 1); };
  auto cj = [](cplx z) { return std::conj(z); };
  const cplx r11 = 1.0 - (R(2, 2) + R(3, 3) + R(4, 4));

  DensityMatrix out(kDim);
  auto set = [&](int i, int j, cplx v) {
    out(i - 1, j - 1) = v;
    if (i != j) out(j - 1, i - 1) = std::conj(v);
  };
  set(4, 4, -2.0 * G * R(4, 4) + 2.0 * (Oc * (R(4, 3) + R(4, 2))).imag());
  set(3, 3, -G * (R(3, 3) - R(4, 4)) - G12 * R(2, 3).real() + 2.0 * g * R(2, 3).imag() -
                2.0 * (R(4, 3) * Oc + R(1, 3) * O).imag());
  set(2, 2, -G * (R(2, 2) - R(4, 4)) - G12 * R(2, 3).real() - 2.0 * g * R(2, 3).imag() -
                2.0 * (R(4, 2) * Oc + R(1, 2) * O).imag());
  set(1, 1, -G * (R(3, 3) + R(2, 2)) + 2.0 * G12 * R(2, 3).real() +
                2.0 * (O * (R(1, 2) + R(1, 3))).imag());
  set(4, 1, -(I * dp + G) * R(4, 1) + I * O * (cj(R(1, 2)) + cj(R(1, 3)) - R(4, 3) - R(4, 2)));
  set(4, 2, -(I * d1 + 1.5 * G) * R(4, 2) + I * O * (R(2, 2) - R(4, 4)) +
                I * (R(2, 3) * O - R(4, 1) * Oc) - (I * g + G / 2.0) * R(4, 3));
  set(4, 3, -(I * d2 + 1.5 * G) * R(4, 3) + I * O * (R(3, 3) - R(4, 4)) +
                I * (cj(R(2, 3)) * O - R(4, 1) * Oc) - (I * g + G / 2.0) * R(4, 2));
  set(1, 2, (I * d1 - G / 2.0) * R(1, 2) - (I * g + G12 / 2.0) * R(1, 3) +
                I * Oc * (R(2, 2) - r11 + cj(R(2, 3))) - I * O * cj(R(4, 1)) +
                G12 * cj(R(4, 3)) + G * cj(R(4, 2)));
  set(1, 3, (I * d2 - G / 2.0) * R(1, 3) - (I * g + G12 / 2.0) * R(1, 2) +
                I * Oc * (R(3, 3) - r11 + R(2, 3)) - I * O * cj(R(4, 1)) + G * cj(R(4, 3)) +
                G12 * cj(R(4, 2)));
  set(2, 3, -(I * dm + G) * R(2, 3) - (I * g + G / 2.0) * R(3, 3) + G12 * R(4, 4) +
                (I * g - G / 2.0) * R(2, 2) - I * O * (cj(R(4, 3)) - R(1, 2)) +
                I * Oc * (R(4, 2) - cj(R(1, 3))));
  for (int k = 0; k < 4; ++k) out(k, k) = out(k, k).real();
  return out;
}

StateCheck inspect_state(const DensityMatrix& rho) {
  StateCheck c;
  c.hermiticity = rho.hermiticity_error();
  c.trace_error = std::abs(rho.trace() - 1.0);
  ComplexMatrix h = rho;
  h += rho.adjoint();
  h *= 0.5;
  c.min_eigenvalue = hermitian_eig(h).values.front();
  c.purity = (h * h).trace().real();
  return c;
}

void require_valid_state(const DensityMatrix& rho, const char* context) {
  if (rho.size() != kDim) throw DomainError(std::string(context) + ": density matrix must be 4x4");
  if (!rho.all_finite()) throw DomainError(std::string(context) + ": non-finite density matrix");
  const auto c = inspect_state(rho);
  std::ostringstream os;
  if (c.hermiticity > 1e-10) os << "not Hermitian (" << c.hermiticity << ")";
  else if (c.trace_error > 1e-9) os << "trace differs from 1 by " << c.trace_error;
  else if (c.min_eigenvalue < -1e-8) os << "negative eigenvalue " << c.min_eigenvalue;
  if (!os.str().empty()) throw DomainError(std::string(context) + ": invalid state, " + os.str());
}

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::superoperator: return "superoperator";
    case Engine::explicit_equations: return "explicit";
    case Engine::propagator: return "propagator";
  }
  return "?";
}

EvolutionResult evolve(const EffectiveParams& eff, const DensityMatrix& rho0,
                       const std::vector<double>& t_samples, const EvolutionOptions& opts) {
  require_valid_state(rho0, "evolve");
  const auto L = build_superoperator(eff);
  const double lnorm = L.max_abs();

  OdeRhs rhs;
  if (opts.engine != Engine::explicit_equations) {
    rhs = [&L](double, std::span<const cplx> y, std::span<cplx> dy) {
      for (std::size_t r = 0; r < kVec; ++r) {
        cplx acc{0.0, 0.0};
        for (std::size_t c = 0; c < kVec; ++c) acc += L(r, c) * y[c];
        dy[r] = acc;
      }
    };
  } else {
    rhs = [&eff](double, std::span<const cplx> y, std::span<cplx> dy) {
      const auto d = vectorize(rhs_explicit(eff, unvectorize(y)));
      std::copy(d.begin(), d.end(), dy.begin());
    };
  }

  const auto y0 = vectorize(rho0);
  auto propagate = [&] {
    OdeSolution out;
    std::vector<cplx> y = y0;
    double t = 0.0;
    for (double ts : t_samples) {
      if (ts < t) throw DomainError("evolve: sample times must be increasing and >= 0");
      if (ts > t) y = multiply(expm(L * cplx{ts - t, 0.0}), y);
      t = ts;
      out.times.push_back(ts);
      out.states.push_back(y);
    }
    return out;
  };
  Engine used = opts.engine;
  OdeSolution sol;
  if (used == Engine::propagator) {
    sol = propagate();
  } else {
    try {
      sol = integrate_adaptive(rhs, y0, 0.0, t_samples, opts.ode);
    } catch (const StiffnessError&) {
      if (used != Engine::superoperator || !opts.stiff_fallback) throw;
      used = Engine::propagator;
      sol = propagate();
    }
  }

  EvolutionResult res;
  res.engine = used;
  res.times = sol.times;
  res.rhs_evaluations = sol.rhs_evaluations;
  res.min_eigenvalue = 1.0;
  res.states.reserve(sol.states.size());
  for (std::size_t k = 0; k < sol.states.size(); ++k) {
    const auto raw = unvectorize(sol.states[k]);
    DensityMatrix rho = raw;
    rho += raw.adjoint();
    rho *= 0.5;
    const double tr = rho.trace().real();
    const double drift = std::abs(tr - 1.0);
    res.max_trace_drift = std::max(res.max_trace_drift, drift);
    if (drift > opts.renormalize_threshold) {
      rho *= 1.0 / tr;
      ++res.renormalizations;
    }
    const auto check = inspect_state(rho);
    res.min_eigenvalue = std::min(res.min_eigenvalue, check.min_eigenvalue);
    res.max_purity = std::max(res.max_purity, check.purity);
    if (check.min_eigenvalue < -1e-8) {
      std::ostringstream os;
      os << "evolve: state lost positivity at t = " << res.times[k] << " s (eigenvalue "
         << check.min_eigenvalue << "); tighten the integrator tolerances";
      throw NumericalError(os.str());
    }
    res.states.push_back(std::move(rho));
  }

  if (!res.states.empty()) {
    std::vector<cplx> d(kVec);
    rhs(res.times.back(), vectorize(res.states.back()), d);
    for (const auto& v : d) res.convergence_metric = std::max(res.convergence_metric, std::abs(v));
    res.steady = res.convergence_metric <= opts.steady_tolerance * lnorm;
  }
  return res;
}

SteadyState steady_state(const EffectiveParams& eff) {
  const auto L = build_superoperator(eff);
  SteadyState out;
  out.generator_norm = L.max_abs();

  const auto sv = singular_values(L);
  out.null_gap = sv[kVec - 2] / sv.front();
  if (out.null_gap < 1e-10) {
    std::ostringstream os;
    os << "steady_state: null space of the generator is not one-dimensional (second-smallest "
          "singular value "
       << out.null_gap << " of the largest); use long-time evolution instead";
    throw NumericalError(os.str());
  }

  ComplexMatrix m = L;
  std::vector<cplx> b(kVec, cplx{0.0, 0.0});
  for (std::size_t c = 0; c < kVec; ++c) m(0, c) = 0.0;
  for (std::size_t k = 0; k < kDim; ++k) m(0, k + kDim * k) = 1.0;
  b[0] = 1.0;
  const auto x = solve_linear(m, b);

  DensityMatrix rho = unvectorize(x);
  DensityMatrix herm = rho;
  herm += rho.adjoint();
  herm *= 0.5;
  out.rho = herm;

  for (const auto& v : multiply(L, vectorize(out.rho))) out.residual = std::max(out.residual, std::abs(v));
  if (out.residual > 1e-10 * out.generator_norm) {
    std::ostringstream os;
    os << "steady_state: residual " << out.residual << " exceeds 1e-10 of the generator norm "
       << out.generator_norm;
    throw NumericalError(os.str());
  }
  return out;
}

std::vector<double> log_time_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw DomainError("log_time_grid: need 0 < lo < hi and at least two samples");
  }
  std::vector<double> t(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    t[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  t.front() = lo;
  t.back() = hi;
  return t;
}

CrossCheckReport cross_check_explicit(const EffectiveParams& eff, double rel_tol, int random_states,
                                      unsigned seed, const EffectiveParams* explicit_eff) {
  const auto L = build_superoperator(eff);
  const EffectiveParams& xeff = explicit_eff ? *explicit_eff : eff;
  const double scale = L.max_abs();
  CrossCheckReport rep;
  rep.tolerance = rel_tol * scale;

  auto outputs = [&](const DensityMatrix& rho, bool use_explicit) {
    const auto d = use_explicit ? rhs_explicit(xeff, rho) : apply(L, rho);
    std::array<cplx, kElements.size()> v{};
    for (std::size_t e = 0; e < kElements.size(); ++e) v[e] = d(kElements[e][0], kElements[e][1]);
    return v;
  };

  std::array<double, 15> p{};
  const auto base_x = outputs(from_parameters(p), true);
  const auto base_l = outputs(from_parameters(p), false);
  std::vector<bool> differs(kElements.size(), false);

  for (std::size_t k = 0; k <= p.size(); ++k) {
    std::array<cplx, kElements.size()> cx = base_x, cl = base_l;
    std::string pname = "const";
    if (k < p.size()) {
      std::array<double, 15> q{};
      q[k] = 1.0;
      const auto vx = outputs(from_parameters(q), true);
      const auto vl = outputs(from_parameters(q), false);
      for (std::size_t e = 0; e < kElements.size(); ++e) {
        cx[e] = vx[e] - base_x[e];
        cl[e] = vl[e] - base_l[e];
      }
      pname = parameter_name(k);
    }
    for (std::size_t e = 0; e < kElements.size(); ++e) {
      if (std::abs(cx[e] - cl[e]) > rep.tolerance) {
        rep.mismatches.push_back(
            {element_name(kElements[e][0], kElements[e][1]), pname, cx[e], cl[e]});
        differs[e] = true;
      }
    }
  }
  for (std::size_t e = 0; e < kElements.size(); ++e) {
    (differs[e] ? rep.elements_differing : rep.elements_matching)
        .push_back(element_name(kElements[e][0], kElements[e][1]));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < random_states; ++s) {
    ComplexMatrix a(kDim);
    for (auto& v : a.data()) v = cplx(normal(rng), normal(rng));
    ComplexMatrix rho = a * a.adjoint();
    rho *= 1.0 / rho.trace().real();
    const auto dx = rhs_explicit(xeff, rho);
    const auto dl = apply(L, rho);
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t j = 0; j < kDim; ++j)
        rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(dx(i, j) - dl(i, j)) / scale);
  }
  return rep;
}

}  // namespace mnpq
