#pragma once

// Small dense complex linear algebra, ODE integration and spherical Bessel
// kernels. Everything here is a pure function of its arguments.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mnpq/errors.hpp"

namespace mnpq {

using cplx = std::complex<double>;

/// Square complex matrix, row-major, n <= 16 in practice.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n, cplx{0.0, 0.0}) {}
  ComplexMatrix(std::size_t n, std::vector<cplx> row_major);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);

  std::size_t size() const noexcept { return n_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix conj() const;
  ComplexMatrix transpose() const;
  cplx trace() const;

  /// Largest element modulus.
  double max_abs() const;
  /// Largest |m_ij - conj(m_ji)|.
  double hermiticity_error() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
  std::size_t n_ = 0;
  std::vector<cplx> data_;
};

std::vector<cplx> multiply(const ComplexMatrix& a, std::span<const cplx> x);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct NumericTolerances {
  double hermitian = 1e-10;    // relative to max(1, ||m||_max)
  double psd_clamp = 1e-10;    // negative eigenvalues down to -psd_clamp are clamped
  double singular_pivot = 1e-14;
  int jacobi_max_sweeps = 100;
};

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // orthonormal columns
};

/// Cyclic Jacobi diagonalisation of a Hermitian matrix.
HermitianEigen hermitian_eig(const ComplexMatrix& m, const NumericTolerances& tol = {});

/// Principal square root of a Hermitian positive semi-definite matrix.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& m, const NumericTolerances& tol = {});

/// Gaussian elimination with partial pivoting.
std::vector<cplx> solve_linear(const ComplexMatrix& a, std::span<const cplx> b,
                               const NumericTolerances& tol = {});

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const ComplexMatrix& a, const NumericTolerances& tol = {});

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
ComplexMatrix expm(const ComplexMatrix& a);

// ---------------------------------------------------------------------------
// ODE integration

using OdeRhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dydt)>;

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 selects a step from the initial derivative
  double min_step_fraction = 1e-6;  // of the integration span
  std::size_t max_steps = 50'000'000;
};

struct OdeSolution {
  std::vector<double> times;
  std::vector<std::vector<cplx>> states;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
};

/// Dormand-Prince 5(4) with PI step-size control. Integration starts at t0 and
/// the solution is reported exactly at each entry of `t_samples` (step-hitting).
OdeSolution integrate_adaptive(const OdeRhs& rhs, std::span<const cplx> y0, double t0,
                               std::span<const double> t_samples, const OdeOptions& opts = {});

// ---------------------------------------------------------------------------
// Spherical Bessel functions

/// j_l(z) / (z j_l'(z)) via downward recurrence of the logarithmic derivative.
cplx bessel_log_ratio(int l, cplx z);

/// Logarithmic derivative j_l'(z)/j_l(z).
cplx bessel_log_derivative(int l, cplx z);

}  // namespace mnpq
