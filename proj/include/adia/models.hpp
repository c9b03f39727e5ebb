#ifndef ADIA_MODELS_HPP
#define ADIA_MODELS_HPP

#include <memory>
#include <utility>

#include "adia/complex_matrix.hpp"
#include "adia/schedule.hpp"

namespace adia {

// Time-dependent Hamiltonian contract: h(tau) always, optionally an analytic
// hdot(tau) and an exact propagator U(tau) with its derivative.
class HamiltonianModel {
 public:
  virtual ~HamiltonianModel() = default;

  virtual int dim() const = 0;
  virtual double horizon() const = 0;
  virtual ComplexMatrix h(double tau) const = 0;
  virtual void h_into(double tau, ComplexMatrix& out) const { out = h(tau); }

  virtual bool has_hdot() const { return false; }
  virtual ComplexMatrix hdot(double tau) const;

  virtual bool has_propagator() const { return false; }
  virtual ComplexMatrix propagator(double tau) const;      // U(tau), U(0) = I
  virtual ComplexMatrix propagator_dot(double tau) const;  // dU/dtau
};

struct SpinHalfParams {
  double eta = 1.0;  // > 0
  Schedule xi = Schedule::constant(0.0);
  double horizon = 1.0;  // > 0
};

// h(tau) = eta*sz + xi(tau)*(sx cos 2 eta tau + sy sin 2 eta tau):
// a spin-half in a rotating transverse field, with the exact propagator
// U(tau) = exp(-i sz eta tau) exp(-i sx \int_0^tau xi).
class SpinHalfModel final : public HamiltonianModel {
 public:
  explicit SpinHalfModel(SpinHalfParams p);

  int dim() const override { return 2; }
  double horizon() const override { return p_.horizon; }
  ComplexMatrix h(double tau) const override;
  void h_into(double tau, ComplexMatrix& out) const override;
  bool has_hdot() const override { return true; }
  ComplexMatrix hdot(double tau) const override;
  bool has_propagator() const override { return true; }
  ComplexMatrix propagator(double tau) const override;
  ComplexMatrix propagator_dot(double tau) const override;

  const SpinHalfParams& params() const { return p_; }
  double xi_integral(double tau) const { return (*xi_int_)(tau); }

 private:
  SpinHalfParams p_;
  std::shared_ptr<const ScheduleIntegral> xi_int_;
};

// Companion system h^b(tau) = i dU^dagger/dtau U built from the base model's
// propagator; its spectrum is the sign-flipped spectrum of the base.
class DualModel final : public HamiltonianModel {
 public:
  explicit DualModel(std::shared_ptr<const HamiltonianModel> base);

  int dim() const override { return base_->dim(); }
  double horizon() const override { return base_->horizon(); }
  ComplexMatrix h(double tau) const override;
  bool has_hdot() const override { return base_->has_hdot(); }
  ComplexMatrix hdot(double tau) const override;  // -U^dag hdot_base U

  const HamiltonianModel& base() const { return *base_; }

 private:
  std::shared_ptr<const HamiltonianModel> base_;
};

// Linear sweep through an avoided crossing; plumbing for sweep demos.
// h(tau) = sweep_rate*(tau - horizon/2)*sz + coupling*sx.
class LandauZenerModel final : public HamiltonianModel {
 public:
  LandauZenerModel(double sweep_rate, double coupling, double horizon);

  int dim() const override { return 2; }
  double horizon() const override { return horizon_; }
  ComplexMatrix h(double tau) const override;
  bool has_hdot() const override { return true; }
  ComplexMatrix hdot(double tau) const override;

 private:
  double v_, g_, horizon_;
};

// Constant Hamiltonian; handy for trivial-limit checks. Its propagator
// exp(-i H tau) is exact through the cached eigendecomposition.
class ConstantModel final : public HamiltonianModel {
 public:
  ConstantModel(ComplexMatrix h, double horizon);
  int dim() const override { return h_.dim(); }
  double horizon() const override { return horizon_; }
  ComplexMatrix h(double) const override { return h_; }
  bool has_hdot() const override { return true; }
  ComplexMatrix hdot(double) const override { return ComplexMatrix::zero(h_.dim()); }
  bool has_propagator() const override { return true; }
  ComplexMatrix propagator(double tau) const override;
  ComplexMatrix propagator_dot(double tau) const override;

 private:
  ComplexMatrix h_;
  double horizon_;
  std::vector<double> evals_;
  ComplexMatrix evecs_;
};

ComplexMatrix spin_half_h(const SpinHalfParams& p, double tau);
// (U, Udot); unitary to 1e-10 with i Udot U^dag == spin_half_h to 1e-8.
std::pair<ComplexMatrix, ComplexMatrix> spin_half_propagator(const SpinHalfModel& m, double tau);
// i Udot^dag U of the base model; throws MissingPropagator without one.
ComplexMatrix dual_h(const HamiltonianModel& base, double tau);

}  // namespace adia

#endif
