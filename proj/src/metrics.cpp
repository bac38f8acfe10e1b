#include "mnpq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mnpq {
namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix h = m;
  h += m.adjoint();
  h *= 0.5;
  return h;
}

double clamp_eigenvalue(double lam, double tol, const char* what) {
  if (lam >= 0.0) return lam;
  if (lam >= -tol) return 0.0;
  std::ostringstream os;
  os << what << ": eigenvalue " << lam << " below the clamp threshold " << -tol;
  throw NumericalError(os.str());
}

}  // namespace

ComplexMatrix spin_flip(const DensityMatrix& rho) {
  // sigma_y kron sigma_y in the (gg, ge, eg, ee) basis is the anti-diagonal
  // (-1, 1, 1, -1).
  ComplexMatrix yy(4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy * rho.conj() * yy;
}

double concurrence(const DensityMatrix& rho, const NumericTolerances& tol) {
  const auto h = hermitian_part(rho);
  const auto sq = hermitian_sqrt(h, tol);
  const auto m = hermitian_part(sq * spin_flip(h) * sq);
  auto values = hermitian_eig(m, tol).values;
  std::vector<double> lam(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    lam[k] = std::sqrt(clamp_eigenvalue(values[k], tol.psd_clamp, "concurrence"));
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  const double c = lam[0] - lam[1] - lam[2] - lam[3];
  return std::clamp(c, 0.0, 1.0);
}

ComplexMatrix relative_phase_generator() {
  const double d[4] = {0.0, -1.0, 1.0, 0.0};
  return ComplexMatrix::diagonal(d);
}

double qfi(const DensityMatrix& rho, const ComplexMatrix& generator, const NumericTolerances& tol) {
  const auto eig = hermitian_eig(hermitian_part(rho), tol);
  const std::size_t n = eig.values.size();
  std::vector<double> lam(n);
  for (std::size_t k = 0; k < n; ++k) lam[k] = clamp_eigenvalue(eig.values[k], tol.psd_clamp, "qfi");
  const auto hm = eig.vectors.adjoint() * generator * eig.vectors;
  double f = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = lam[i] + lam[j];
      if (s <= 1e-12) continue;
      const double diff = lam[i] - lam[j];
      f += 2.0 * diff * diff / s * std::norm(hm(i, j));
    }
  }
  return f;
}

double pure_state_variance_qfi(std::span<const cplx> psi, const ComplexMatrix& generator) {
  const auto hpsi = multiply(generator, psi);
  cplx mean{0.0, 0.0}, norm{0.0, 0.0};
  double second = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    mean += std::conj(psi[k]) * hpsi[k];
    norm += std::conj(psi[k]) * psi[k];
    second += std::norm(hpsi[k]);
  }
  const double nn = norm.real();
  const double m = mean.real() / nn;
  return 4.0 * (second / nn - m * m);
}

}  // namespace mnpq
