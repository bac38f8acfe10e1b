#include <cmath>

#include "mnpq/numerics.hpp"

namespace mnpq {

ComplexMatrix expm(const ComplexMatrix& a) {
  if (!a.all_finite()) throw DomainError("expm: non-finite matrix entry");
  const std::size_t n = a.size();
  double norm1 = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < n; ++r) col += std::abs(a(r, c));
    norm1 = std::max(norm1, col);
  }
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  ComplexMatrix x = a * cplx{std::ldexp(1.0, -squarings), 0.0};

  // 0.5^19 / 19! is far below double precision
  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 18; ++k) {
    term = term * x;
    term *= cplx{1.0 / k, 0.0};
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace mnpq
