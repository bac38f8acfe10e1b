#include "mnpq/effective_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mnpq/units.hpp"

namespace mnpq {

QubitParams QubitParams::antisymmetric(double mu, double gamma, double omega_pl, double delta) {
  QubitParams q;
  q.dipole_moment = mu;
  q.decay_rate = gamma;
  q.frequency = {omega_pl + delta, omega_pl - delta};
  q.detuning = delta;
  return q;
}

std::vector<ModeTerm> effective_terms(const std::vector<PlasmonMode>& modes, double rabi_mnp,
                                      double drive_frequency) {
  if (modes.empty()) throw DomainError("effective_parameters: empty mode list");
  std::vector<ModeTerm> terms;
  terms.reserve(modes.size());
  for (const auto& m : modes) {
    if (!(m.gamma > 0.0)) {
      std::ostringstream os;
      os << "effective_parameters: mode l = " << m.l << " has non-positive damping " << m.gamma;
      throw DomainError(os.str());
    }
    const double dw = m.omega - drive_frequency;
    const cplx delta_l(m.gamma / 2.0, dw);
    const double weight = m.coupling * m.coupling / std::norm(delta_l);
    ModeTerm t;
    t.l = m.l;
    if (m.l == 1) t.rabi = m.coupling * cplx(0.0, rabi_mnp) / delta_l;
    t.exchange = dw * weight;
    t.cross_decay = m.gamma * weight;
    terms.push_back(t);
  }
  return terms;
}

EffectiveParams effective_parameters(const std::vector<PlasmonMode>& modes,
                                     const QubitParams& qubits, double rabi_mnp,
                                     double drive_frequency) {
  if (!(qubits.decay_rate > 0.0)) throw DomainError("effective_parameters: qubit decay must be positive");
  const auto terms = effective_terms(modes, rabi_mnp, drive_frequency);
  cplx rabi{0.0, 0.0};
  double exchange = 0.0, cross = 0.0;
  for (const auto& t : terms) {
    rabi += t.rabi;
    exchange += t.exchange;
    cross += t.cross_decay;
  }
  EffectiveParams e;
  e.rabi = {rabi, rabi};
  e.exchange = exchange;
  e.cross_decay = cross;
  for (int i = 0; i < 2; ++i) {
    e.detuning[i] = (qubits.frequency[i] - drive_frequency) - exchange;
    e.decay[i] = qubits.decay_rate + cross;
  }
  e.drive_frequency = drive_frequency;
  return e;
}

double ConvergenceReport::max_increment() const {
  return std::max({rabi_increment, exchange_increment, cross_decay_increment});
}

ConvergenceReport last_order_increment(const std::vector<ModeTerm>& terms) {
  if (terms.empty()) throw DomainError("last_order_increment: empty term list");
  cplx rabi{0.0, 0.0};
  double exchange = 0.0, cross = 0.0;
  for (const auto& t : terms) {
    rabi += t.rabi;
    exchange += t.exchange;
    cross += t.cross_decay;
  }
  const auto& last = terms.back();
  auto rel = [](double inc, double total) {
    if (inc == 0.0) return 0.0;
    return std::abs(inc) / std::abs(total);
  };
  ConvergenceReport r;
  r.order = last.l;
  r.rabi_increment = rel(std::abs(last.rabi), std::abs(rabi));
  r.exchange_increment = rel(last.exchange, exchange);
  r.cross_decay_increment = rel(last.cross_decay, cross);
  return r;
}

ConvergenceReport highest_active_increment(const std::vector<ModeTerm>& terms) {
  std::size_t n = terms.size();
  while (n > 1 && terms[n - 1].cross_decay == 0.0) --n;
  return last_order_increment({terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(n)});
}

DickeParams dicke_parameters(const EffectiveParams& eff) {
  const double s2 = std::sqrt(2.0);
  DickeParams d;
  d.rabi_s = (eff.rabi[0] + eff.rabi[1]) / s2;
  d.rabi_a = (eff.rabi[0] - eff.rabi[1]) / s2;
  d.delta_plus = eff.detuning[0] + eff.detuning[1];
  d.delta_minus = eff.detuning[0] - eff.detuning[1];
  d.delta_s = d.delta_plus / 2.0 + eff.exchange;
  d.delta_a = d.delta_plus / 2.0 - eff.exchange;
  d.gamma_s = (eff.decay[0] + eff.decay[1] + 2.0 * eff.cross_decay) / 2.0;
  d.gamma_a = (eff.decay[0] + eff.decay[1] - 2.0 * eff.cross_decay) / 2.0;
  return d;
}

DickeTrajectory dicke_rate_evolution(const DickeParams& dicke, const DickePopulations& initial,
                                     const std::vector<double>& t_samples,
                                     const OdeOptions& opts) {
  const double total = initial.ss + initial.aa + initial.gg + initial.ee;
  if (initial.ss < 0.0 || initial.aa < 0.0 || initial.gg < 0.0 || initial.ee < 0.0 ||
      total > 1.0 + 1e-12) {
    throw DomainError("dicke_rate_evolution: populations must be non-negative with sum <= 1");
  }
  const double gs = dicke.gamma_s, ga = dicke.gamma_a;
  const double half_dm = dicke.delta_minus / 2.0;
  const double split = dicke.delta_s - dicke.delta_a;
  const cplx I(0.0, 1.0);

  // state: ss, aa, gg, ee, sa
  OdeRhs rhs = [=](double, std::span<const cplx> y, std::span<cplx> dy) {
    const cplx ss = y[0], aa = y[1], ee = y[3], sa = y[4];
    const cplx as = std::conj(sa);
    dy[0] = -gs * (ss - ee) - I * half_dm * (as - sa);
    dy[1] = -ga * (aa - ee) + I * half_dm * (as - sa);
    dy[2] = gs * ss + ga * aa;
    dy[3] = -(gs + ga) * ee;
    dy[4] = -I * split * sa - I * half_dm * (aa - ss) - 0.5 * (gs + ga) * sa;
  };
  const std::vector<cplx> y0{initial.ss, initial.aa, initial.gg, initial.ee, initial.sa};
  const auto sol = integrate_adaptive(rhs, y0, 0.0, t_samples, opts);

  DickeTrajectory out;
  out.times = sol.times;
  out.states.reserve(sol.states.size());
  for (const auto& y : sol.states) {
    out.states.push_back({y[0].real(), y[1].real(), y[2].real(), y[3].real(), y[4]});
  }
  return out;
}

void PhysicalSetup::validate() const {
  material.validate();
  geometry.validate();
  if (multipoles < 1) throw DomainError("multipole count N must be >= 1");
  if (intensity < 0.0) throw DomainError("drive intensity must be non-negative");
  if (drive_mode == DriveFrequencyMode::explicit_value && !(drive_frequency > 0.0)) {
    throw DomainError("explicit drive frequency must be positive");
  }
  if (!(qubit_decay > 0.0)) throw DomainError("qubit decay rate must be positive");
  if (!(detuning_fraction >= 0.0)) throw DomainError("detuning fraction must be non-negative");
}

double SystemModel::weak_excitation_ratio() const { return rabi_mnp / modes.front().gamma; }

int SystemModel::suppressed_modes() const {
  int n = 0;
  for (const auto& m : modes) n += m.suppressed ? 1 : 0;
  return n;
}

SystemModel assemble(const PhysicalSetup& setup) {
  setup.validate();
  const auto& mat = setup.material;
  const double r = setup.geometry.radius;

  SystemModel sys;
  sys.omega_pl = dipolar_resonance(mat, r, setup.response);
  sys.drive_frequency = setup.drive_mode == DriveFrequencyMode::resonant ? sys.omega_pl
                                                                         : setup.drive_frequency;
  const double mu = units::elementary_charge * setup.geometry.qd_radius;
  sys.qubits = QubitParams::antisymmetric(mu, setup.qubit_decay, sys.omega_pl,
                                          setup.detuning_fraction * sys.omega_pl);

  ModeOptions mopts;
  mopts.invalid_correction = setup.invalid_correction;
  sys.modes.reserve(static_cast<std::size_t>(setup.multipoles));
  for (int l = 1; l <= setup.multipoles; ++l) {
    sys.modes.push_back(
        corrected_mode(mat, setup.geometry, l, sys.drive_frequency, mu, setup.response, mopts));
  }

  sys.dipole = dipole_moment(mat, r, sys.drive_frequency, setup.response);
  sys.radiative_rate = radiative_decay(sys.dipole.chi, sys.omega_pl, mat.eps_host);
  if (setup.radiative == RadiativeDamping::include) {
    auto& m1 = sys.modes.front();
    m1.gamma_r = sys.radiative_rate;
    m1.gamma = m1.gamma_nr + m1.gamma_r;
  }
  sys.rabi_mnp = excitation_rate(setup.intensity, sys.dipole.chi, mat.eps_host);

  sys.terms = effective_terms(sys.modes, sys.rabi_mnp, sys.drive_frequency);
  sys.effective = effective_parameters(sys.modes, sys.qubits, sys.rabi_mnp, sys.drive_frequency);
  sys.dicke = dicke_parameters(sys.effective);
  return sys;
}

}  // namespace mnpq
