#include <cmath>
#include <sstream>

#include "mnpq/numerics.hpp"

namespace mnpq {

std::vector<cplx> solve_linear(const ComplexMatrix& a_in, std::span<const cplx> b_in,
                               const NumericTolerances& tol) {
  const std::size_t n = a_in.size();
  if (b_in.size() != n) {
    throw DomainError("solve_linear: right-hand side has length " + std::to_string(b_in.size()) +
                      ", matrix dimension is " + std::to_string(n));
  }
  ComplexMatrix a = a_in;
  std::vector<cplx> b(b_in.begin(), b_in.end());
  const double pivot_floor = tol.singular_pivot * a_in.max_abs();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best <= pivot_floor || best == 0.0) {
      std::ostringstream os;
      os << "solve_linear: matrix is numerically singular (pivot " << best << " at column " << k
         << ", threshold " << pivot_floor << ")";
      throw NumericalError(os.str());
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      if (f == cplx{}) continue;
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    cplx acc = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= a(ii, j) * x[j];
    x[ii] = acc / a(ii, ii);
  }
  return x;
}

}  // namespace mnpq
