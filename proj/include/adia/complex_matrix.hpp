#ifndef ADIA_COMPLEX_MATRIX_HPP
#define ADIA_COMPLEX_MATRIX_HPP

#include <complex>
#include <vector>

namespace adia {

using cplx = std::complex<double>;
using State = std::vector<cplx>;

// Dense square complex matrix, row-major, sized for dimensions 2..16.
class ComplexMatrix {
 public:
  ComplexMatrix() : dim_(0) {}
  explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

  void set_zero();
  void set_identity();

  int dim() const { return dim_; }
  cplx& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const cplx& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }
  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  ComplexMatrix adjoint() const;
  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix& operator*=(cplx s);

  State column(int c) const;
  void set_column(int c, const State& v);

  // max entrywise |A - A^dagger|; 0 for an exactly Hermitian matrix
  double hermiticity_defect() const;
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

 private:
  int dim_;
  std::vector<cplx> a_;
};

// Vector helpers shared across modules.
cplx inner(const State& a, const State& b);  // conjugate-linear in the first argument
double norm(const State& v);
void normalize(State& v);
State matvec(const ComplexMatrix& m, const State& v);
double state_distance(const State& a, const State& b);  // Euclidean
double fidelity(const State& a, const State& b);         // |<a|b>|^2

}  // namespace adia

#endif
