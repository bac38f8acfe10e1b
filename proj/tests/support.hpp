#pragma once

#include <random>

#include "mnpq/numerics.hpp"

namespace test {

using mnpq::ComplexMatrix;
using mnpq::cplx;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  ComplexMatrix m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = {nd(rng), nd(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  auto a = random_matrix(rng, n);
  auto h = a + a.adjoint();
  h *= 0.5;
  return h;
}

// exp(iH) for random Hermitian H
inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  return mnpq::expm(random_hermitian(rng, n) * cplx{0.0, 1.0});
}

inline ComplexMatrix random_density(std::mt19937_64& rng, std::size_t n = 4) {
  const auto a = random_matrix(rng, n);
  auto rho = a * a.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

inline ComplexMatrix outer(const std::vector<cplx>& psi) {
  ComplexMatrix m(psi.size());
  for (std::size_t r = 0; r < psi.size(); ++r)
    for (std::size_t c = 0; c < psi.size(); ++c) m(r, c) = psi[r] * std::conj(psi[c]);
  return m;
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

}  // namespace test
