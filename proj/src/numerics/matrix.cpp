#include <algorithm>
#include <cmath>

#include "mnpq/numerics.hpp"

namespace mnpq {

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<cplx> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n_ * n_) {
    throw DomainError("ComplexMatrix: expected " + std::to_string(n_ * n_) + " entries, got " +
                      std::to_string(data_.size()));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out(*this);
  for (auto& v : out.data_) v = std::conj(v);
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::hermiticity_error() const {
  double m = 0.0;
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = r; c < n_; ++c)
      m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.n_ != n_) throw DomainError("ComplexMatrix: dimension mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.n_ != n_) throw DomainError("ComplexMatrix: dimension mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DomainError("ComplexMatrix: dimension mismatch in *");
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::vector<cplx> multiply(const ComplexMatrix& a, std::span<const cplx> x) {
  const std::size_t n = a.size();
  if (x.size() != n) throw DomainError("multiply: vector length does not match matrix");
  std::vector<cplx> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.size(), nb = b.size();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace mnpq
