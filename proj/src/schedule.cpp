#include "adia/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace adia {

Schedule Schedule::constant(double value) { return Schedule(Kind::Constant, {value}); }

Schedule Schedule::linear(double intercept, double slope) {
  return Schedule(Kind::Linear, {intercept, slope});
}

Schedule Schedule::sinusoidal(double offset, double amplitude, double omega, double phase) {
  return Schedule(Kind::Sinusoidal, {offset, amplitude, omega, phase});
}

Schedule Schedule::tabulated(std::vector<double> taus, std::vector<double> values) {
  if (taus.size() != values.size())
    throw std::invalid_argument("tabulated schedule: taus and values differ in length");
  Schedule s(Kind::Tabulated, {});
  s.spline_ = std::make_shared<CubicSpline>(std::move(taus), std::move(values));
  return s;
}

double Schedule::value(double tau) const {
  switch (kind_) {
    case Kind::Constant:
      return params_[0];
    case Kind::Linear:
      return params_[0] + params_[1] * tau;
    case Kind::Sinusoidal:
      return params_[0] + params_[1] * std::sin(params_[2] * tau + params_[3]);
    case Kind::Tabulated:
      return spline_->value(tau);
  }
  return 0.0;
}

double Schedule::derivative(double tau) const {
  switch (kind_) {
    case Kind::Constant:
      return 0.0;
    case Kind::Linear:
      return params_[1];
    case Kind::Sinusoidal:
      return params_[1] * params_[2] * std::cos(params_[2] * tau + params_[3]);
    case Kind::Tabulated:
      return spline_->derivative(tau);
  }
  return 0.0;
}

ScheduleIntegral::ScheduleIntegral(const Schedule& s, double tol)
    : f_([s](double t) { return s.value(t); }), tol_(tol) {
  if (s.kind() == Schedule::Kind::Constant) {
    exact_constant_ = true;
    constant_value_ = s.value(0.0);
  }
}

ScheduleIntegral::ScheduleIntegral(std::function<double(double)> f, double tol)
    : f_(std::move(f)), tol_(tol) {}

double ScheduleIntegral::operator()(double tau) const {
  if (tau == 0.0) return 0.0;
  if (exact_constant_) return constant_value_ * tau;

  double anchor_tau = 0.0, anchor_val = 0.0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(tau);
    if (it != cache_.end()) return it->second;
    // extend from the closest cached anchor at or below tau (forward sweeps
    // then cost one short panel per new grid point)
    auto ub = cache_.upper_bound(tau);
    if (ub != cache_.begin()) {
      --ub;
      anchor_tau = ub->first;
      anchor_val = ub->second;
    }
  }
  const double piece = adaptive_simpson(f_, anchor_tau, tau, tol_);
  const double total = anchor_val + piece;
  {
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(tau, total);
  }
  return total;
}

}  // namespace adia
