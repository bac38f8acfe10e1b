#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mnpq/numerics.hpp"

namespace mnpq {
namespace {

// Parameters of the unitary plane rotation J (acting on indices p < q) that
// annihilates the (p,q) entry of a Hermitian 2x2 block [[a, h], [conj(h), b]]:
//   J_pp = J_qq = c,  J_pq = s*e,  J_qp = -s*conj(e),  e = h/|h|.
struct Rotation {
  double c;
  double s;
  cplx e;
};

Rotation jacobi_rotation(double a, double b, cplx h) {
  const double mag = std::abs(h);
  const double tau = (b - a) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, h / mag};
}

// M <- M J restricted to columns p, q.
void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const cplx se = r.s * r.e;
  const cplx sec = r.s * std::conj(r.e);
  for (std::size_t k = 0; k < m.size(); ++k) {
    const cplx mp = m(k, p), mq = m(k, q);
    m(k, p) = r.c * mp - sec * mq;
    m(k, q) = se * mp + r.c * mq;
  }
}

// M <- J^dagger M restricted to rows p, q.
void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const cplx se = r.s * r.e;
  const cplx sec = r.s * std::conj(r.e);
  for (std::size_t k = 0; k < m.size(); ++k) {
    const cplx mp = m(p, k), mq = m(q, k);
    m(p, k) = r.c * mp - se * mq;
    m(q, k) = sec * mp + r.c * mq;
  }
}

double off_diagonal_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

double frobenius(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& v : m.data()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

HermitianEigen hermitian_eig(const ComplexMatrix& m, const NumericTolerances& tol) {
  const std::size_t n = m.size();
  if (!m.all_finite()) throw DomainError("hermitian_eig: non-finite matrix entry");
  const double scale = std::max(1.0, m.max_abs());
  const double herm = m.hermiticity_error();
  if (herm > tol.hermitian * scale) {
    std::ostringstream os;
    os << "hermitian_eig: matrix is not Hermitian (max |m - m^dagger| = " << herm << ")";
    throw DomainError(os.str());
  }

  // Symmetrise exactly so the rotations see a Hermitian matrix.
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double fro = frobenius(a);
  const double skip = 1e-16 * fro;
  const double target = 1e-14 * fro;
  int sweep = 0;
  for (; sweep < tol.jacobi_max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx h = a(p, q);
        if (std::abs(h) <= skip) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const Rotation r = jacobi_rotation(a(p, p).real(), a(q, q).real(), h);
        rotate_columns(a, p, q, r);
        rotate_rows(a, p, q, r);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, r);
      }
    }
  }
  const double residual = off_diagonal_norm(a);
  if (residual > target) {
    std::ostringstream os;
    os << "hermitian_eig: no convergence after " << sweep << " sweeps (off-diagonal norm "
       << residual << ", matrix norm " << fro << ")";
    throw NumericalError(os.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m, const NumericTolerances& tol) {
  const auto eig = hermitian_eig(m, tol);
  const double floor = -tol.psd_clamp * std::max(1.0, m.max_abs());
  const std::size_t n = m.size();
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.values[k];
    if (lam < floor) {
      std::ostringstream os;
      os << "hermitian_sqrt: matrix is not positive semi-definite (eigenvalue " << lam << ")";
      throw NumericalError(os.str());
    }
    roots[k] = std::sqrt(std::max(0.0, lam));
  }
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      cplx acc{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k)
        acc += eig.vectors(i, k) * roots[k] * std::conj(eig.vectors(j, k));
      out(i, j) = acc;
      out(j, i) = std::conj(acc);
    }
  for (std::size_t i = 0; i < n; ++i) out(i, i) = out(i, i).real();
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& a_in, const NumericTolerances& tol) {
  if (!a_in.all_finite()) throw DomainError("singular_values: non-finite matrix entry");
  ComplexMatrix a = a_in;
  const std::size_t n = a.size();
  const double eps = 1e-15;
  int sweep = 0;
  bool rotated = true;
  for (; sweep < tol.jacobi_max_sweeps && rotated; ++sweep) {
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
          alpha += std::norm(a(k, p));
          beta += std::norm(a(k, q));
          gamma += std::conj(a(k, p)) * a(k, q);
        }
        const double mag = std::abs(gamma);
        if (mag == 0.0 || mag <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        rotate_columns(a, p, q, jacobi_rotation(alpha, beta, gamma));
      }
    }
  }
  if (rotated) {
    throw NumericalError("singular_values: one-sided Jacobi did not converge after " +
                         std::to_string(sweep) + " sweeps");
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::norm(a(k, j));
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace mnpq
