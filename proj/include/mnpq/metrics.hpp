#pragma once

// Two-qubit entanglement (Wootters concurrence) and phase sensitivity
// (quantum Fisher information).

#include "mnpq/lindblad.hpp"

namespace mnpq {

/// (sigma_y kron sigma_y) rho^* (sigma_y kron sigma_y).
ComplexMatrix spin_flip(const DensityMatrix& rho);

double concurrence(const DensityMatrix& rho, const NumericTolerances& tol = {});

/// H = (sigma_z kron I - I kron sigma_z)/2 with sigma_z|e> = +|e>:
/// diag(0, -1, +1, 0) over (|gg>, |ge>, |eg>, |ee>).
ComplexMatrix relative_phase_generator();

double qfi(const DensityMatrix& rho, const ComplexMatrix& generator,
           const NumericTolerances& tol = {});

/// 4 (<H^2> - <H>^2) for a pure state.
double pure_state_variance_qfi(std::span<const cplx> psi, const ComplexMatrix& generator);

}  // namespace mnpq
