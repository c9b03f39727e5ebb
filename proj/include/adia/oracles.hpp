#ifndef ADIA_ORACLES_HPP
#define ADIA_ORACLES_HPP

#include <memory>
#include <string>
#include <utility>

#include "adia/models.hpp"

namespace adia {

enum class Regime { XiDominant, EtaDominantSmallArea, Neither };
std::string regime_label(Regime r);

// Closed-form solutions for the rotating-field spin-half model, used as
// ground truth by tests and acceptance runs. Signs: +1 upper level, -1 lower.
class SpinHalfClosedForm {
 public:
  explicit SpinHalfClosedForm(SpinHalfParams p);

  double omega(double tau) const;        // sqrt(xi^2 + eta^2)
  double mixing_angle(double tau) const; // cos = eta/omega, in [0, pi/2)
  double delta(double tau) const;        // -int_0^tau xi
  double xi_integral(double tau) const { return (*xi_int_)(tau); }

  State exact_state(int sign, double tau) const;      // exp(-i sz eta tau) exp(-i sx int xi) |sign,0>
  State adiabatic_state(int sign, double tau) const;  // the U(1)-invariant orbit through |sign,0>
  State initial_state(int sign) const;                // |sign,0>
  double survival(double tau) const;                  // |<adia_+|exact_+>|^2 closed form

  const SpinHalfParams& params() const { return p_; }

 private:
  SpinHalfParams p_;
  std::shared_ptr<const ScheduleIntegral> xi_int_;
  std::shared_ptr<const ScheduleIntegral> omega_int_;        // int omega
  std::shared_ptr<const ScheduleIntegral> geom_phase_int_;   // int (omega - eta^2/omega)
};

// Sufficient-regime classifier at threshold R (non-strict boundaries):
// XiDominant          iff min xi/eta >= R on the window,
// EtaDominantSmallArea iff min eta/xi >= R and int xi <= 1/R,
// Neither otherwise. Schedules are sampled on 1001 window points.
Regime regime_classify(const SpinHalfClosedForm& cf, std::pair<double, double> window,
                       double threshold = 10.0);

}  // namespace adia

#endif
