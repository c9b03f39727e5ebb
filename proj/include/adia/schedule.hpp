#ifndef ADIA_SCHEDULE_HPP
#define ADIA_SCHEDULE_HPP

#include <memory>
#include <mutex>
#include <map>
#include <vector>

#include "adia/numerics.hpp"

namespace adia {

// Scalar control schedule xi(tau) with an analytic derivative.
class Schedule {
 public:
  enum class Kind { Constant, Linear, Sinusoidal, Tabulated };

  static Schedule constant(double value);
  static Schedule linear(double intercept, double slope);
  static Schedule sinusoidal(double offset, double amplitude, double omega, double phase);
  // Natural cubic spline through >= 4 points on a strictly increasing grid.
  static Schedule tabulated(std::vector<double> taus, std::vector<double> values);

  double value(double tau) const;
  double derivative(double tau) const;
  Kind kind() const { return kind_; }

 private:
  Schedule(Kind k, std::vector<double> p) : kind_(k), params_(std::move(p)) {}
  Kind kind_ = Kind::Constant;
  std::vector<double> params_;
  std::shared_ptr<const CubicSpline> spline_;  // Tabulated only
};

// Cached \int_0^tau f(lambda) dlambda by adaptive Simpson (abs tol 1e-12).
// Safe for concurrent evaluation; entries extend from the nearest anchor.
// Constant schedules integrate exactly and skip the cache.
class ScheduleIntegral {
 public:
  explicit ScheduleIntegral(const Schedule& s, double tol = 1e-12);
  explicit ScheduleIntegral(std::function<double(double)> f, double tol = 1e-12);
  double operator()(double tau) const;

 private:
  std::function<double(double)> f_;
  bool exact_constant_ = false;
  double constant_value_ = 0.0;
  double tol_;
  mutable std::mutex mu_;
  mutable std::map<double, double> cache_;  // tau -> integral from 0
};

}  // namespace adia

#endif
