#include <cmath>
#include <sstream>

#include "mnpq/numerics.hpp"

namespace mnpq {

// Downward recurrence of d_n(z) = j_n'(z)/j_n(z):
//   d_{n-1} = (n-1)/z - 1 / (d_n + (n+1)/z),
// which follows from j_{n-1} = j_n' + (n+1)/z j_n and j_n' = -j_{n+1} + n/z j_n.
// The recurrence is stable downward for complex arguments and never forms
// j_n itself, so it stays finite when |Im z| is in the hundreds.
cplx bessel_log_derivative(int l, cplx z) {
  if (l < 1 || l > 60) throw DomainError("bessel_log_derivative: order must be in [1, 60]");
  if (std::abs(z) == 0.0) throw DomainError("bessel_log_derivative: argument must be non-zero");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("bessel_log_derivative: non-finite argument");
  }
  const int start = l + 20 + static_cast<int>(std::ceil(std::abs(z)));
  const cplx inv_z = 1.0 / z;
  cplx d = static_cast<double>(start + 1) * inv_z;
  for (int n = start; n > l; --n) {
    const cplx denom = d + static_cast<double>(n + 1) * inv_z;
    d = static_cast<double>(n - 1) * inv_z - 1.0 / denom;
  }
  return d;
}

cplx bessel_log_ratio(int l, cplx z) {
  const cplx zd = z * bessel_log_derivative(l, z);
  if (!(std::abs(zd) >= 1e-300) || !std::isfinite(zd.real()) || !std::isfinite(zd.imag())) {
    std::ostringstream os;
    os << "bessel_log_ratio: z = " << z << " is at a zero of j_" << l << "'";
    throw NumericalError(os.str());
  }
  return 1.0 / zd;
}

}  // namespace mnpq
