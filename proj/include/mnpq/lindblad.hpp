#pragma once

// Two-qubit master equation. Basis order |1>=|gg>, |2>=|ge>, |3>=|eg>,
// |4>=|ee>, qubit 1 is the left Kronecker factor and sigma_i lowers e -> g.
// Density matrices are vectorised column-major: vec(rho)[i + 4 j] = rho(i, j).

#include <string>
#include <vector>

#include "mnpq/effective_model.hpp"

namespace mnpq {

using DensityMatrix = ComplexMatrix;

/// sigma_i for qubit i in {0, 1}, as a 4x4 operator.
ComplexMatrix lowering_operator(int qubit);

std::vector<cplx> vectorize(const DensityMatrix& rho);
DensityMatrix unvectorize(std::span<const cplx> v);

/// |k><k| for k in 0..3.
DensityMatrix basis_projector(int k);

/// Effective Hamiltonian in units of hbar (rad/s).
ComplexMatrix effective_hamiltonian(const EffectiveParams& eff);

/// 16x16 generator L with d vec(rho)/dt = L vec(rho).
ComplexMatrix build_superoperator(const EffectiveParams& eff);

/// Element-wise equations for the ten independent entries, written out
/// explicitly. rho_11 is replaced by 1 - (rho_22 + rho_33 + rho_44) in the
/// rho_12 and rho_13 equations. Assumes equal qubit decay (decay[0] is used).
DensityMatrix rhs_explicit(const EffectiveParams& eff, const DensityMatrix& rho);

struct StateCheck {
  double hermiticity = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  double purity = 0.0;
};
StateCheck inspect_state(const DensityMatrix& rho);

/// Throws DomainError unless rho is Hermitian (1e-10), unit trace (1e-9) and
/// has no eigenvalue below -1e-8.
void require_valid_state(const DensityMatrix& rho, const char* context);

/// `propagator` applies exp(L dt) between samples; it needs no step control
/// and is used for cells too stiff for the explicit integrator.
enum class Engine { superoperator, explicit_equations, propagator };
std::string_view to_string(Engine e);

struct EvolutionOptions {
  Engine engine = Engine::superoperator;
  OdeOptions ode;
  double renormalize_threshold = 1e-12;
  double steady_tolerance = 1e-6;  // ||d rho/dt||_max / ||L||_max
  // superoperator runs that underflow the step size are redone with the propagator
  bool stiff_fallback = true;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  Engine engine = Engine::superoperator;  // the engine that produced the states
  bool steady = false;
  double convergence_metric = 0.0;  // ||d rho/dt||_max at the last sample, rad/s
  double max_trace_drift = 0.0;     // before renormalisation
  double min_eigenvalue = 0.0;
  double max_purity = 0.0;
  std::size_t renormalizations = 0;
  std::size_t rhs_evaluations = 0;
};

EvolutionResult evolve(const EffectiveParams& eff, const DensityMatrix& rho0,
                       const std::vector<double>& t_samples, const EvolutionOptions& opts = {});

struct SteadyState {
  DensityMatrix rho;
  double residual = 0.0;       // ||L vec(rho)||_max
  double generator_norm = 0.0; // ||L||_max
  double null_gap = 0.0;       // second-smallest / largest singular value
};

SteadyState steady_state(const EffectiveParams& eff);

/// `count` log-spaced times over [lo, hi] (seconds).
std::vector<double> log_time_grid(double lo, double hi, std::size_t count);

// ---------------------------------------------------------------------------
// Cross-check of the explicit equations against the superoperator.
//
// Both right-hand sides are affine in the 15 real parameters of a unit-trace
// Hermitian matrix (rho_22, rho_33, rho_44 and the real and imaginary parts of
// the six upper off-diagonal entries; rho_11 follows from the trace). Their
// coefficients are extracted exactly by finite differences about |1><1| and
// compared one by one.

struct CoefficientMismatch {
  std::string element;    // e.g. "rho_33"
  std::string parameter;  // e.g. "Re rho_23" or "const"
  cplx explicit_value;
  cplx superoperator_value;
};

struct CrossCheckReport {
  std::vector<CoefficientMismatch> mismatches;
  double max_discrepancy = 0.0;  // over random states, relative to ||L||_max
  double tolerance = 0.0;
  std::vector<std::string> elements_matching;
  std::vector<std::string> elements_differing;
  bool agrees() const { return mismatches.empty(); }
};

/// `explicit_eff`, when given, replaces the parameters fed to the explicit
/// equations (fault injection).
CrossCheckReport cross_check_explicit(const EffectiveParams& eff, double rel_tol = 1e-9,
                                      int random_states = 100, unsigned seed = 7,
                                      const EffectiveParams* explicit_eff = nullptr);

}  // namespace mnpq
