#ifndef ADIA_TEST_HELPERS_HPP
#define ADIA_TEST_HELPERS_HPP

#include <random>

#include "adia/complex_matrix.hpp"
#include "adia/models.hpp"

namespace adia::testing {

inline ComplexMatrix random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix a(dim);
  for (int r = 0; r < dim; ++r) {
    a(r, r) = dist(rng);
    for (int c = r + 1; c < dim; ++c) {
      const cplx v(dist(rng), dist(rng));
      a(r, c) = v;
      a(c, r) = std::conj(v);
    }
  }
  return a;
}

inline State random_unit_state(int dim, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  State v(static_cast<size_t>(dim));
  for (auto& x : v) x = cplx(dist(rng), dist(rng));
  normalize(v);
  return v;
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline SpinHalfParams spin_half(double eta, double xi_const, double horizon) {
  SpinHalfParams p;
  p.eta = eta;
  p.xi = Schedule::constant(xi_const);
  p.horizon = horizon;
  return p;
}

// A time-dependent model that commutes with itself at all times: the strict
// adiabatic case (all off-diagonal couplings vanish identically).
class CommutingModel final : public HamiltonianModel {
 public:
  explicit CommutingModel(double horizon) : horizon_(horizon) {}
  int dim() const override { return 2; }
  double horizon() const override { return horizon_; }
  ComplexMatrix h(double tau) const override {
    const double f = 1.0 + 0.3 * std::sin(tau);
    ComplexMatrix m(2);
    m(0, 0) = f;
    m(1, 1) = -f;
    return m;
  }
  bool has_hdot() const override { return true; }
  ComplexMatrix hdot(double tau) const override {
    const double fd = 0.3 * std::cos(tau);
    ComplexMatrix m(2);
    m(0, 0) = fd;
    m(1, 1) = -fd;
    return m;
  }

 private:
  double horizon_;
};

}  // namespace adia::testing

#endif
