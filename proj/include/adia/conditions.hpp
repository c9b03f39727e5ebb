#ifndef ADIA_CONDITIONS_HPP
#define ADIA_CONDITIONS_HPP

#include <string>
#include <utility>
#include <vector>

#include "adia/spectral.hpp"

namespace adia {

enum class Verdict { Pass, Fail, Inapplicable };
std::string verdict_label(Verdict v);

struct PhaseFlags {
  bool span_ok = false;  // |theta(end) - theta(0)| >= 2*pi
  bool rate_ok = false;  // |dtheta/dtau| >= 1 everywhere on the window
};

// Everything the three conditions know about one ordered level pair (n,m).
struct PairConditionResult {
  int n = 0, m = 0;
  std::vector<double> gamma_abs;          // |gamma_nm(tau_k)|
  std::vector<double> delta;              // Delta_mn(tau_k), NaN masked
  std::vector<double> traditional_ratio;  // |gamma_nm| / |e_n - e_m|
  std::vector<double> pointwise_ratio;    // |gamma_nm| / |e_n - e_m + Delta_mn|
  double max_traditional_ratio = 0.0;
  double max_pointwise_ratio = 0.0;
  double integral_lhs = 0.0;  // |int (e_n - e_m + Delta_mn)|
  double integral_rhs = 0.0;  // int |gamma_nm|
  PhaseFlags phase;
  bool vacuous = false;  // coupling below zero_floor on the whole window
  // Raw inequality outcomes at threshold R (these define the verdicts):
  bool traditional_satisfied = false;
  bool pointwise_satisfied = false;
  bool integral_satisfied = false;
  // Labels: pass/fail from the raw outcome, downgraded to "inapplicable"
  // when the phase preconditions fail on a non-vacuous pair.
  Verdict traditional_verdict = Verdict::Fail;
  Verdict pointwise_verdict = Verdict::Fail;
  Verdict integral_verdict = Verdict::Fail;
};

struct ConditionReport {
  double threshold = 10.0;                 // the operational meaning of ">>"
  std::pair<double, double> window{0, 0};  // [tau_a, tau_b]
  std::vector<PairConditionResult> pairs;  // ordered pairs n != m
  const PairConditionResult& pair(int n, int m) const;
};

// Pointwise condition over the whole grid: both the theta-rate form and the
// expanded (gap + geometric potential) form; they agree through the identity
// dtheta_nm/dtau = e_n - e_m + Delta_mn.
ConditionReport pointwise_condition(const SpectralFlow& flow, const EigenFrameSequence& frames,
                                    double threshold = 10.0);

// Integral condition on a window; MaskedInterval if the window is partially
// masked for some pair (a fully masked pair passes vacuously).
ConditionReport integral_condition(const SpectralFlow& flow, const EigenFrameSequence& frames,
                                   std::pair<double, double> window, double threshold = 10.0);

// Both conditions plus the traditional baseline in one report.
ConditionReport evaluate_conditions(const SpectralFlow& flow, const EigenFrameSequence& frames,
                                    double threshold = 10.0);

// Phase preconditions from an unwrapped theta series on the grid.
PhaseFlags phase_preconditions(const std::vector<double>& theta, const TimeGrid& grid);

// Max over tau, n, m of |gamma^b_nm - (-e^a_m delta_mn + gamma^a_nm)| after
// aligning the tracked dual frames with U^dagger phi^a_n (permutation and
// per-level phase from overlaps; LevelMatchingFailure when ambiguous).
double dual_gamma_residual(const EigenFrameSequence& a_frames, const SpectralFlow& a_flow,
                           const EigenFrameSequence& b_frames, const SpectralFlow& b_flow,
                           const HamiltonianModel& base_with_propagator);

struct DualComparison {
  // max over tau of each system's pointwise ratio, per ordered pair
  std::vector<double> base_max_ratio;
  std::vector<double> dual_max_ratio;
  // max |ratio^b - |gamma^a|/|Delta^a|| over mutually unmasked points
  double ratio_identity_residual = 0.0;
  std::string summary;
};

DualComparison compare_dual_conditions(const ConditionReport& base_report,
                                       const ConditionReport& dual_report);

}  // namespace adia

#endif
