#include "adia/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adia/errors.hpp"
#include "adia/numerics.hpp"

namespace adia {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void ensure_full(SpectralFlow& flow, const EigenFrameSequence& frames) {
  for (int n = 0; n < flow.dim; ++n)
    for (int m = 0; m < flow.dim; ++m) {
      if (n == m) continue;
      if (!flow.has_theta(n, m)) theta_phase(flow, frames, n, m);
      if (!flow.has_delta(m, n)) geometric_potential(flow, m, n);
    }
}

int window_start_index(const TimeGrid& grid, double a) {
  for (int k = 0; k < grid.size(); ++k)
    if (grid[k] >= a - 1e-12) return k;
  return grid.size() - 1;
}

int window_end_index(const TimeGrid& grid, double b) {
  for (int k = grid.size() - 1; k >= 0; --k)
    if (grid[k] <= b + 1e-12) return k;
  return 0;
}

// theta-rate flags over the unmasked portion of [lo, hi].
PhaseFlags flags_from_theta(const std::vector<double>& theta, const std::vector<double>& x,
                            int lo, int hi) {
  PhaseFlags out;
  int first = -1, last = -1;
  for (int k = lo; k <= hi; ++k)
    if (!std::isnan(theta[static_cast<size_t>(k)])) {
      if (first < 0) first = k;
      last = k;
    }
  if (first < 0 || last <= first) return out;
  out.span_ok = std::abs(theta[static_cast<size_t>(last)] - theta[static_cast<size_t>(first)]) >= kTwoPi;

  double min_rate = std::numeric_limits<double>::infinity();
  int k = first;
  while (k <= last) {
    while (k <= last && std::isnan(theta[static_cast<size_t>(k)])) ++k;
    int b = k;
    while (k <= last && !std::isnan(theta[static_cast<size_t>(k)])) ++k;
    if (k - b < 2) continue;
    std::vector<double> xs(x.begin() + b, x.begin() + k);
    std::vector<double> ys(theta.begin() + b, theta.begin() + k);
    for (double d : derivative_series(xs, ys)) min_rate = std::min(min_rate, std::abs(d));
  }
  out.rate_ok = std::isfinite(min_rate) && min_rate >= 1.0;
  return out;
}

std::string window_crossing_message(const EigenFrameSequence& frames, int lo, int hi) {
  for (int k = std::max(lo, 0); k < hi; ++k)
    if (frames.crossing[static_cast<size_t>(k)]) {
      std::ostringstream os;
      os << "analysis window contains a flagged eigenvalue crossing in ["
         << frames.grid[k] << ", " << frames.grid[k + 1] << "]";
      return os.str();
    }
  return {};
}

ConditionReport evaluate_core(const SpectralFlow& flow_in, const EigenFrameSequence& frames,
                              double threshold, int lo, int hi, bool strict_integral_window) {
  if (!(threshold > 1.0)) throw std::invalid_argument("condition threshold must exceed 1");
  SpectralFlow flow = flow_in;
  ensure_full(flow, frames);

  if (const std::string msg = window_crossing_message(frames, lo, hi); !msg.empty())
    throw NumericalError(msg);

  const auto& x = flow.grid.points();
  ConditionReport report;
  report.threshold = threshold;
  report.window = {x[static_cast<size_t>(lo)], x[static_cast<size_t>(hi)]};

  for (int n = 0; n < flow.dim; ++n)
    for (int m = 0; m < flow.dim; ++m) {
      if (n == m) continue;
      PairConditionResult pr;
      pr.n = n;
      pr.m = m;
      const auto& theta = flow.theta[static_cast<size_t>(flow.pair_index(n, m))];
      const auto& delta = flow.delta[static_cast<size_t>(flow.pair_index(m, n))];
      const int npts = hi - lo + 1;
      pr.gamma_abs.resize(static_cast<size_t>(npts));
      pr.delta.resize(static_cast<size_t>(npts));
      pr.traditional_ratio.assign(static_cast<size_t>(npts), 0.0);
      pr.pointwise_ratio.assign(static_cast<size_t>(npts), 0.0);

      bool all_masked = true;
      double worst_identity = 0.0;
      for (int k = lo; k <= hi; ++k) {
        const size_t i = static_cast<size_t>(k - lo);
        const double g = flow.gamma_abs(k, n, m);
        pr.gamma_abs[i] = g;
        pr.delta[i] = delta[static_cast<size_t>(k)];
        if (flow.masked(k, n, m)) continue;  // negligible coupling: ratio 0
        all_masked = false;
        const double gap = frames.value(k, n) - frames.value(k, m);
        pr.traditional_ratio[i] = g / std::abs(gap);
        const double den = gap + delta[static_cast<size_t>(k)];
        if (!std::isnan(den) && den != 0.0) pr.pointwise_ratio[i] = g / std::abs(den);
      }
      pr.vacuous = all_masked;

      // the rate form of the pointwise denominator must agree with the
      // expanded form through the theta identity
      {
        int k = lo;
        while (k <= hi) {
          while (k <= hi && std::isnan(theta[static_cast<size_t>(k)])) ++k;
          int b = k;
          while (k <= hi && !std::isnan(theta[static_cast<size_t>(k)])) ++k;
          if (k - b < 2) continue;
          std::vector<double> xs(x.begin() + b, x.begin() + k);
          std::vector<double> ys(theta.begin() + b, theta.begin() + k);
          const std::vector<double> rate = derivative_series(xs, ys);
          for (int j = b; j < k; ++j) {
            const double den_expanded =
                frames.value(j, n) - frames.value(j, m) + delta[static_cast<size_t>(j)];
            if (std::isnan(den_expanded)) continue;
            worst_identity = std::max(
                worst_identity, std::abs(rate[static_cast<size_t>(j - b)] - den_expanded));
          }
        }
        if (worst_identity > 1e-3)
          throw StepTooCoarse("theta-rate and expanded pointwise denominators disagree by " +
                              std::to_string(worst_identity));
      }

      pr.max_traditional_ratio =
          *std::max_element(pr.traditional_ratio.begin(), pr.traditional_ratio.end());
      pr.max_pointwise_ratio =
          *std::max_element(pr.pointwise_ratio.begin(), pr.pointwise_ratio.end());

      // integral form over the window
      if (pr.vacuous) {
        std::vector<double> gap(static_cast<size_t>(flow.grid.size()));
        for (int k = 0; k < flow.grid.size(); ++k)
          gap[static_cast<size_t>(k)] = frames.value(k, n) - frames.value(k, m);
        const std::vector<double> cum = cumulative_integral(x, gap);
        pr.integral_lhs =
            std::abs(cum[static_cast<size_t>(hi)] - cum[static_cast<size_t>(lo)]);
        pr.integral_rhs = 0.0;
      } else {
        bool any_masked = false;
        for (int k = lo; k <= hi; ++k) any_masked = any_masked || flow.masked(k, n, m);
        if (any_masked && strict_integral_window) {
          std::vector<std::pair<double, double>> spans = masked_spans(flow, n, m);
          std::vector<std::pair<double, double>> in_window;
          for (const auto& s : spans)
            if (s.second >= x[static_cast<size_t>(lo)] && s.first <= x[static_cast<size_t>(hi)])
              in_window.push_back(s);
          throw MaskedInterval(in_window);
        }
        pr.integral_lhs =
            std::abs(theta[static_cast<size_t>(hi)] - theta[static_cast<size_t>(lo)]);
        std::vector<double> mag(static_cast<size_t>(flow.grid.size()));
        for (int k = 0; k < flow.grid.size(); ++k)
          mag[static_cast<size_t>(k)] = flow.gamma_abs(k, n, m);
        const std::vector<double> cum = cumulative_integral(x, mag);
        pr.integral_rhs = cum[static_cast<size_t>(hi)] - cum[static_cast<size_t>(lo)];
      }

      pr.phase = pr.vacuous ? PhaseFlags{} : flags_from_theta(theta, x, lo, hi);

      pr.traditional_satisfied = pr.max_traditional_ratio <= 1.0 / threshold;
      pr.pointwise_satisfied = pr.max_pointwise_ratio <= 1.0 / threshold;
      pr.integral_satisfied = pr.integral_lhs >= threshold * pr.integral_rhs;

      pr.traditional_verdict = pr.traditional_satisfied ? Verdict::Pass : Verdict::Fail;
      // a vacuous pair is strictly adiabatic (zero coupling), so the phase
      // preconditions are moot; otherwise they gate applicability
      const bool applicable = pr.vacuous || (pr.phase.span_ok && pr.phase.rate_ok);
      pr.pointwise_verdict = applicable ? (pr.pointwise_satisfied ? Verdict::Pass : Verdict::Fail)
                                        : Verdict::Inapplicable;
      pr.integral_verdict = applicable ? (pr.integral_satisfied ? Verdict::Pass : Verdict::Fail)
                                       : Verdict::Inapplicable;
      report.pairs.push_back(std::move(pr));
    }
  return report;
}

}  // namespace

std::string verdict_label(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inapplicable:
      return "inapplicable";
  }
  return "fail";
}

const PairConditionResult& ConditionReport::pair(int n, int m) const {
  for (const auto& p : pairs)
    if (p.n == n && p.m == m) return p;
  throw std::out_of_range("no such level pair in the condition report");
}

ConditionReport pointwise_condition(const SpectralFlow& flow, const EigenFrameSequence& frames,
                                    double threshold) {
  return evaluate_core(flow, frames, threshold, 0, flow.grid.size() - 1, false);
}

ConditionReport integral_condition(const SpectralFlow& flow, const EigenFrameSequence& frames,
                                   std::pair<double, double> window, double threshold) {
  const int lo = window_start_index(flow.grid, window.first);
  const int hi = window_end_index(flow.grid, window.second);
  if (hi <= lo) throw std::invalid_argument("integral window does not contain two grid points");
  return evaluate_core(flow, frames, threshold, lo, hi, true);
}

ConditionReport evaluate_conditions(const SpectralFlow& flow, const EigenFrameSequence& frames,
                                    double threshold) {
  return evaluate_core(flow, frames, threshold, 0, flow.grid.size() - 1, true);
}

PhaseFlags phase_preconditions(const std::vector<double>& theta, const TimeGrid& grid) {
  return flags_from_theta(theta, grid.points(), 0, grid.size() - 1);
}

double dual_gamma_residual(const EigenFrameSequence& a_frames, const SpectralFlow& a_flow,
                           const EigenFrameSequence& b_frames, const SpectralFlow& b_flow,
                           const HamiltonianModel& base) {
  if (!base.has_propagator())
    throw MissingPropagator("dual residual needs the base model's propagator");
  if (!(a_frames.grid == b_frames.grid)) throw GridMismatch("frame grids differ");
  const int npts = a_frames.grid.size();
  const int dim = a_frames.dim;

  // reference dual frames psi_n(tau) = U^dag(tau) phi^a_n(tau)
  std::vector<ComplexMatrix> psi(static_cast<size_t>(npts));
  for (int k = 0; k < npts; ++k) {
    const ComplexMatrix udag = base.propagator(a_frames.grid[k]).adjoint();
    psi[static_cast<size_t>(k)] = udag * a_frames.frames[static_cast<size_t>(k)];
  }

  // permutation between reference levels and tracked dual levels, fixed at
  // tau = 0 and required to stay unambiguous along the grid
  std::vector<int> perm(static_cast<size_t>(dim), -1);
  {
    std::vector<char> used(static_cast<size_t>(dim), 0);
    for (int n = 0; n < dim; ++n) {
      int best_j = -1;
      double best = -1.0;
      for (int j = 0; j < dim; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        cplx s{};
        for (int r = 0; r < dim; ++r)
          s += std::conj(psi[0](r, n)) * b_frames.frames[0](r, j);
        if (std::abs(s) > best) {
          best = std::abs(s);
          best_j = j;
        }
      }
      if (best < 0.9)
        throw LevelMatchingFailure("dual level matching ambiguous at tau = 0 (best overlap " +
                                   std::to_string(best) + ")");
      perm[static_cast<size_t>(n)] = best_j;
      used[static_cast<size_t>(best_j)] = 1;
    }
  }

  // per-level phases alpha_n(tau): tracked = e^{i alpha} reference
  std::vector<std::vector<double>> alpha(static_cast<size_t>(dim),
                                         std::vector<double>(static_cast<size_t>(npts)));
  for (int n = 0; n < dim; ++n) {
    std::vector<double> wrapped(static_cast<size_t>(npts));
    for (int k = 0; k < npts; ++k) {
      cplx s{};
      for (int r = 0; r < dim; ++r)
        s += std::conj(psi[static_cast<size_t>(k)](r, n)) *
             b_frames.frames[static_cast<size_t>(k)](r, perm[static_cast<size_t>(n)]);
      if (std::abs(s) < 0.9)
        throw LevelMatchingFailure("dual level matching degraded at tau = " +
                                   std::to_string(a_frames.grid[k]));
      wrapped[static_cast<size_t>(k)] = std::arg(s);
    }
    alpha[static_cast<size_t>(n)] = unwrap_phases(wrapped, 3.14159265358979323846);
  }
  std::vector<std::vector<double>> alpha_dot(static_cast<size_t>(dim));
  for (int n = 0; n < dim; ++n)
    alpha_dot[static_cast<size_t>(n)] =
        derivative_series(a_frames.grid.points(), alpha[static_cast<size_t>(n)]);

  double residual = 0.0;
  for (int k = 0; k < npts; ++k) {
    for (int n = 0; n < dim; ++n)
      for (int m = 0; m < dim; ++m) {
        const cplx g_tracked = b_flow.gamma[static_cast<size_t>(k)](perm[static_cast<size_t>(n)],
                                                                    perm[static_cast<size_t>(m)]);
        cplx g_ref;  // gamma of the exact-gauge dual frames
        if (n == m)
          g_ref = g_tracked + alpha_dot[static_cast<size_t>(n)][static_cast<size_t>(k)];
        else
          g_ref = std::polar(1.0, alpha[static_cast<size_t>(n)][static_cast<size_t>(k)] -
                                      alpha[static_cast<size_t>(m)][static_cast<size_t>(k)]) *
                  g_tracked;
        const cplx expected = (n == m ? cplx(-a_frames.value(k, m), 0.0) : cplx{}) +
                              a_flow.gamma[static_cast<size_t>(k)](n, m);
        residual = std::max(residual, std::abs(g_ref - expected));
      }
  }
  return residual;
}

DualComparison compare_dual_conditions(const ConditionReport& base_report,
                                       const ConditionReport& dual_report) {
  DualComparison out;
  int dim = 0;
  for (const auto& p : base_report.pairs) dim = std::max(dim, std::max(p.n, p.m) + 1);

  double worst = 0.0;
  bool base_all_pass = true, dual_all_pass = true;
  for (const auto& pa : base_report.pairs) {
    // the dual's ascending level order is the base's reversed
    const PairConditionResult& pb = dual_report.pair(dim - 1 - pa.n, dim - 1 - pa.m);
    out.base_max_ratio.push_back(pa.max_pointwise_ratio);
    out.dual_max_ratio.push_back(pb.max_pointwise_ratio);
    base_all_pass = base_all_pass && pa.pointwise_verdict == Verdict::Pass;
    dual_all_pass = dual_all_pass && pb.pointwise_verdict == Verdict::Pass;
    for (size_t i = 0; i < pa.gamma_abs.size(); ++i) {
      const double d = std::abs(pa.delta[i]);
      if (std::isnan(d) || d < 1e-12) continue;
      if (std::isnan(pb.pointwise_ratio[i])) continue;
      if (pa.gamma_abs[i] == 0.0 && pb.pointwise_ratio[i] == 0.0) continue;
      worst = std::max(worst, std::abs(pb.pointwise_ratio[i] - pa.gamma_abs[i] / d));
    }
  }
  out.ratio_identity_residual = worst;

  std::ostringstream os;
  os << "pointwise condition: base " << (base_all_pass ? "pass" : "not guaranteed") << ", dual "
     << (dual_all_pass ? "pass" : "not guaranteed");
  if (base_all_pass && !dual_all_pass)
    os << "; the base system is adiabatic by the pointwise condition, the dual is not guaranteed";
  out.summary = os.str();
  return out;
}

}  // namespace adia
