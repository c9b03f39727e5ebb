#include "adia/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adia {

std::string regime_label(Regime r) {
  switch (r) {
    case Regime::XiDominant:
      return "xi_dominant";
    case Regime::EtaDominantSmallArea:
      return "eta_dominant_small_area";
    case Regime::Neither:
      return "neither";
  }
  return "neither";
}

SpinHalfClosedForm::SpinHalfClosedForm(SpinHalfParams p) : p_(std::move(p)) {
  if (!(p_.eta > 0.0)) throw std::invalid_argument("closed form requires eta > 0");
  xi_int_ = std::make_shared<ScheduleIntegral>(p_.xi);
  const double eta = p_.eta;
  const Schedule xi = p_.xi;
  omega_int_ = std::make_shared<ScheduleIntegral>(
      [eta, xi](double t) { return std::hypot(eta, xi.value(t)); });
  geom_phase_int_ = std::make_shared<ScheduleIntegral>([eta, xi](double t) {
    const double om = std::hypot(eta, xi.value(t));
    return om - eta * eta / om;
  });
}

double SpinHalfClosedForm::omega(double tau) const { return std::hypot(p_.eta, p_.xi.value(tau)); }

double SpinHalfClosedForm::mixing_angle(double tau) const {
  return std::acos(p_.eta / omega(tau));
}

double SpinHalfClosedForm::delta(double tau) const { return -(*xi_int_)(tau); }

State SpinHalfClosedForm::initial_state(int sign) const {
  const double half = 0.5 * mixing_angle(0.0);
  if (sign >= 0) return {cplx(std::cos(half), 0.0), cplx(std::sin(half), 0.0)};
  return {cplx(-std::sin(half), 0.0), cplx(std::cos(half), 0.0)};
}

State SpinHalfClosedForm::exact_state(int sign, double tau) const {
  const State psi0 = initial_state(sign);
  const double a = (*xi_int_)(tau);
  const double ca = std::cos(a), sa = std::sin(a);
  // exp(-i sx a) psi0, then the sz rotation
  const cplx top = ca * psi0[0] + cplx(0.0, -sa) * psi0[1];
  const cplx bot = cplx(0.0, -sa) * psi0[0] + ca * psi0[1];
  const cplx ez = std::polar(1.0, -p_.eta * tau);
  return {ez * top, std::conj(ez) * bot};
}

State SpinHalfClosedForm::adiabatic_state(int sign, double tau) const {
  const double half = 0.5 * mixing_angle(tau);
  const double k = (*geom_phase_int_)(tau);
  const cplx ez = std::polar(1.0, -p_.eta * tau);
  if (sign >= 0) {
    const cplx phase = std::polar(1.0, -k);
    return {phase * ez * std::cos(half), phase * std::conj(ez) * std::sin(half)};
  }
  const cplx phase = std::polar(1.0, k);
  return {-phase * ez * std::sin(half), phase * std::conj(ez) * std::cos(half)};
}

double SpinHalfClosedForm::survival(double tau) const {
  const double xi0 = p_.xi.value(0.0);
  const double xit = p_.xi.value(tau);
  const double d = delta(tau);
  return 0.5 + 0.5 * (xi0 * xit + p_.eta * p_.eta * std::cos(2.0 * d)) /
                   (omega(0.0) * omega(tau));
}

Regime regime_classify(const SpinHalfClosedForm& cf, std::pair<double, double> window,
                       double threshold) {
  const SpinHalfParams& p = cf.params();
  constexpr int kSamples = 1000;
  double min_xi_over_eta = std::numeric_limits<double>::infinity();
  double min_eta_over_xi = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSamples; ++i) {
    const double tau = window.first + (window.second - window.first) * i / kSamples;
    const double xi = p.xi.value(tau);
    min_xi_over_eta = std::min(min_xi_over_eta, xi / p.eta);
    min_eta_over_xi =
        std::min(min_eta_over_xi, xi == 0.0 ? std::numeric_limits<double>::infinity() : p.eta / xi);
  }
  if (min_xi_over_eta >= threshold) return Regime::XiDominant;
  const double area = cf.xi_integral(window.second) - cf.xi_integral(window.first);
  if (min_eta_over_xi >= threshold && area <= 1.0 / threshold)
    return Regime::EtaDominantSmallArea;
  return Regime::Neither;
}

}  // namespace adia
