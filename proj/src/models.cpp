#include "adia/models.hpp"

#include <cmath>
#include <stdexcept>

#include "adia/errors.hpp"
#include "adia/linalg.hpp"

namespace adia {

ComplexMatrix HamiltonianModel::hdot(double) const {
  throw NumericalError("model does not provide an analytic hdot");
}

ComplexMatrix HamiltonianModel::propagator(double) const {
  throw MissingPropagator("model does not expose an exact propagator");
}

ComplexMatrix HamiltonianModel::propagator_dot(double) const {
  throw MissingPropagator("model does not expose an exact propagator derivative");
}

namespace {

void check_spin_half_params(const SpinHalfParams& p) {
  if (!(p.eta > 0.0)) throw std::invalid_argument("spin-half model requires eta > 0");
  if (!(p.horizon > 0.0)) throw std::invalid_argument("spin-half model requires horizon > 0");
  // sampled domain check: xi finite and nonnegative across the horizon
  for (int i = 0; i <= 1000; ++i) {
    const double tau = p.horizon * i / 1000.0;
    double v;
    try {
      v = p.xi.value(tau);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("xi schedule does not cover the horizon");
    }
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("xi schedule must be finite and nonnegative on the horizon");
  }
}

}  // namespace

SpinHalfModel::SpinHalfModel(SpinHalfParams p) : p_(std::move(p)) {
  check_spin_half_params(p_);
  xi_int_ = std::make_shared<ScheduleIntegral>(p_.xi);
}

ComplexMatrix SpinHalfModel::h(double tau) const {
  ComplexMatrix m(2);
  h_into(tau, m);
  return m;
}

void SpinHalfModel::h_into(double tau, ComplexMatrix& out) const {
  const double xi = p_.xi.value(tau);
  const double ph = 2.0 * p_.eta * tau;
  const cplx off = xi * cplx(std::cos(ph), -std::sin(ph));
  out(0, 0) = p_.eta;
  out(0, 1) = off;
  out(1, 0) = std::conj(off);
  out(1, 1) = -p_.eta;
}

ComplexMatrix SpinHalfModel::hdot(double tau) const {
  const double xi = p_.xi.value(tau);
  const double xidot = p_.xi.derivative(tau);
  const double ph = 2.0 * p_.eta * tau;
  const cplx rot(std::cos(ph), -std::sin(ph));
  const cplx off = (cplx(xidot, 0.0) + cplx(0.0, -2.0 * p_.eta * xi)) * rot;
  ComplexMatrix m(2);
  m(0, 1) = off;
  m(1, 0) = std::conj(off);
  return m;
}

ComplexMatrix SpinHalfModel::propagator(double tau) const {
  const double a = (*xi_int_)(tau);
  const double ca = std::cos(a), sa = std::sin(a);
  const cplx ez = std::polar(1.0, -p_.eta * tau);
  // exp(-i sz eta tau) * (cos a - i sin a sx)
  ComplexMatrix u(2);
  u(0, 0) = ez * ca;
  u(0, 1) = ez * cplx(0.0, -sa);
  u(1, 0) = std::conj(ez) * cplx(0.0, -sa);
  u(1, 1) = std::conj(ez) * ca;
  return u;
}

ComplexMatrix SpinHalfModel::propagator_dot(double tau) const {
  // dU/dtau = -i h(tau) U(tau), exact for the closed-form propagator
  ComplexMatrix m = h(tau) * propagator(tau);
  m *= cplx(0.0, -1.0);
  return m;
}

DualModel::DualModel(std::shared_ptr<const HamiltonianModel> base) : base_(std::move(base)) {
  if (!base_->has_propagator())
    throw MissingPropagator("dual construction needs a base model with a propagator");
}

ComplexMatrix DualModel::h(double tau) const { return dual_h(*base_, tau); }

ComplexMatrix DualModel::hdot(double tau) const {
  // d/dtau (i Udot^dag U) = -U^dag hdot_base U
  const ComplexMatrix u = base_->propagator(tau);
  ComplexMatrix m = u.adjoint() * base_->hdot(tau) * u;
  m *= cplx(-1.0, 0.0);
  return m;
}

LandauZenerModel::LandauZenerModel(double sweep_rate, double coupling, double horizon)
    : v_(sweep_rate), g_(coupling), horizon_(horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("Landau-Zener model requires horizon > 0");
  if (!(coupling > 0.0)) throw std::invalid_argument("Landau-Zener model requires coupling > 0");
}

ComplexMatrix LandauZenerModel::h(double tau) const {
  const double z = v_ * (tau - 0.5 * horizon_);
  ComplexMatrix m(2);
  m(0, 0) = z;
  m(0, 1) = g_;
  m(1, 0) = g_;
  m(1, 1) = -z;
  return m;
}

ComplexMatrix LandauZenerModel::hdot(double) const {
  ComplexMatrix m(2);
  m(0, 0) = v_;
  m(1, 1) = -v_;
  return m;
}

ConstantModel::ConstantModel(ComplexMatrix h, double horizon)
    : h_(std::move(h)), horizon_(horizon) {
  if (h_.hermiticity_defect() > 1e-12)
    throw std::invalid_argument("constant model requires a Hermitian matrix");
  EigenDecomposition d = eigh(h_);
  evals_ = std::move(d.values);
  evecs_ = std::move(d.vectors);
}

ComplexMatrix ConstantModel::propagator(double tau) const {
  const int n = h_.dim();
  ComplexMatrix u(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx s{};
      for (int i = 0; i < n; ++i)
        s += evecs_(r, i) * std::polar(1.0, -evals_[static_cast<size_t>(i)] * tau) *
             std::conj(evecs_(c, i));
      u(r, c) = s;
    }
  return u;
}

ComplexMatrix ConstantModel::propagator_dot(double tau) const {
  ComplexMatrix m = h_ * propagator(tau);
  m *= cplx(0.0, -1.0);
  return m;
}

ComplexMatrix spin_half_h(const SpinHalfParams& p, double tau) {
  if (!(p.eta > 0.0)) throw std::invalid_argument("spin-half model requires eta > 0");
  if (tau < 0.0 || tau > p.horizon)
    throw std::invalid_argument("tau outside the configured horizon");
  const double xi = p.xi.value(tau);
  const double ph = 2.0 * p.eta * tau;
  const cplx off = xi * cplx(std::cos(ph), -std::sin(ph));
  ComplexMatrix m(2);
  m(0, 0) = p.eta;
  m(0, 1) = off;
  m(1, 0) = std::conj(off);
  m(1, 1) = -p.eta;
  return m;
}

std::pair<ComplexMatrix, ComplexMatrix> spin_half_propagator(const SpinHalfModel& m, double tau) {
  return {m.propagator(tau), m.propagator_dot(tau)};
}

ComplexMatrix dual_h(const HamiltonianModel& base, double tau) {
  if (!base.has_propagator())
    throw MissingPropagator("dual construction needs a base model with a propagator");
  const ComplexMatrix u = base.propagator(tau);
  ComplexMatrix hb = base.propagator_dot(tau).adjoint() * u;
  hb *= cplx(0.0, 1.0);
  return hb;
}

}  // namespace adia
