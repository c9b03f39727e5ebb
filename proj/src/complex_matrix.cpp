#include "adia/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace adia {

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

void ComplexMatrix::set_zero() { std::fill(a_.begin(), a_.end(), cplx{}); }

void ComplexMatrix::set_identity() {
  set_zero();
  for (int i = 0; i < dim_; ++i) (*this)(i, i) = 1.0;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  ComplexMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int k = 0; k < dim_; ++k) {
      const cplx a = (*this)(r, k);
      if (a == cplx{}) continue;
      for (int c = 0; c < dim_; ++c) m(r, c) += a * rhs(k, c);
    }
  return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  ComplexMatrix m(dim_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + rhs.a_[i];
  return m;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  ComplexMatrix m(dim_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - rhs.a_[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& v : a_) v *= s;
  return *this;
}

State ComplexMatrix::column(int c) const {
  State v(static_cast<size_t>(dim_));
  for (int r = 0; r < dim_; ++r) v[static_cast<size_t>(r)] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_column(int c, const State& v) {
  for (int r = 0; r < dim_; ++r) (*this)(r, c) = v[static_cast<size_t>(r)];
}

double ComplexMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

double ComplexMatrix::max_abs() const {
  double worst = 0.0;
  for (const auto& v : a_) worst = std::max(worst, std::abs(v));
  return worst;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  for (const auto& v : a_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

cplx inner(const State& a, const State& b) {
  cplx s{};
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const State& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

void normalize(State& v) {
  const double n = norm(v);
  if (n > 0.0)
    for (auto& x : v) x /= n;
}

State matvec(const ComplexMatrix& m, const State& v) {
  State out(static_cast<size_t>(m.dim()));
  for (int r = 0; r < m.dim(); ++r) {
    cplx s{};
    for (int c = 0; c < m.dim(); ++c) s += m(r, c) * v[static_cast<size_t>(c)];
    out[static_cast<size_t>(r)] = s;
  }
  return out;
}

double state_distance(const State& a, const State& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

double fidelity(const State& a, const State& b) { return std::norm(inner(a, b)); }

}  // namespace adia
