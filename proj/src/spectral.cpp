#include "adia/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "adia/errors.hpp"
#include "adia/numerics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adia {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Greedy maximum-overlap assignment between previous and current frames.
// Returns perm with perm[level] = current column index.
std::vector<int> match_levels(const ComplexMatrix& prev, const ComplexMatrix& cur, double tau) {
  const int n = prev.dim();
  std::vector<std::vector<double>> ov(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx s{};
      for (int r = 0; r < n; ++r) s += std::conj(prev(r, a)) * cur(r, b);
      ov[static_cast<size_t>(a)][static_cast<size_t>(b)] = std::abs(s);
    }
  std::vector<int> perm(static_cast<size_t>(n), -1);
  std::vector<char> row_done(static_cast<size_t>(n), 0), col_done(static_cast<size_t>(n), 0);
  for (int pick = 0; pick < n; ++pick) {
    double best = -1.0;
    int ba = -1, bb = -1;
    for (int a = 0; a < n; ++a) {
      if (row_done[static_cast<size_t>(a)]) continue;
      for (int b = 0; b < n; ++b) {
        if (col_done[static_cast<size_t>(b)]) continue;
        if (ov[static_cast<size_t>(a)][static_cast<size_t>(b)] > best) {
          best = ov[static_cast<size_t>(a)][static_cast<size_t>(b)];
          ba = a;
          bb = b;
        }
      }
    }
    if (best < 0.5) throw GaugeAmbiguity(tau, best);
    perm[static_cast<size_t>(ba)] = bb;
    row_done[static_cast<size_t>(ba)] = 1;
    col_done[static_cast<size_t>(bb)] = 1;
  }
  return perm;
}

// Derivative of the gauge-fixed level vectors by 5-point stencils.
std::vector<std::vector<State>> frame_derivatives(const EigenFrameSequence& f) {
  const int npts = f.grid.size();
  const int dim = f.dim;
  const int width = std::min(5, npts);
  const auto& x = f.grid.points();
  std::vector<std::vector<State>> dphi(static_cast<size_t>(dim),
                                       std::vector<State>(static_cast<size_t>(npts)));
  for (int k = 0; k < npts; ++k) {
    const int lo = std::clamp(k - width / 2, 0, npts - width);
    std::vector<double> nodes(x.begin() + lo, x.begin() + lo + width);
    const std::vector<double> w = fornberg_weights(x[static_cast<size_t>(k)], nodes, 1);
    for (int m = 0; m < dim; ++m) {
      State d(static_cast<size_t>(dim));
      for (int j = 0; j < width; ++j) {
        const ComplexMatrix& fr = f.frames[static_cast<size_t>(lo + j)];
        for (int r = 0; r < dim; ++r) d[static_cast<size_t>(r)] += w[static_cast<size_t>(j)] * fr(r, m);
      }
      dphi[static_cast<size_t>(m)][static_cast<size_t>(k)] = std::move(d);
    }
  }
  return dphi;
}

struct UnmaskedRun {
  int begin = 0;  // inclusive
  int end = 0;    // exclusive
};

std::vector<UnmaskedRun> unmasked_runs(const std::vector<char>& mask) {
  std::vector<UnmaskedRun> runs;
  const int n = static_cast<int>(mask.size());
  int k = 0;
  while (k < n) {
    while (k < n && mask[static_cast<size_t>(k)]) ++k;
    if (k >= n) break;
    const int b = k;
    while (k < n && !mask[static_cast<size_t>(k)]) ++k;
    runs.push_back({b, k});
  }
  return runs;
}

}  // namespace

EigenFrameSequence track_frames(const HamiltonianModel& model, const TimeGrid& grid,
                                const TrackingOptions& opts) {
  const int npts = grid.size();
  std::vector<ComplexMatrix> hs(static_cast<size_t>(npts));
  for (int k = 0; k < npts; ++k) hs[static_cast<size_t>(k)] = model.h(grid[k]);

  std::vector<EigenDecomposition> decs = eigh_batch(hs, opts.exec, opts.hermitian_tol);

  EigenFrameSequence out;
  out.grid = grid;
  out.dim = model.dim();
  out.values.resize(static_cast<size_t>(npts));
  out.frames.resize(static_cast<size_t>(npts));
  out.crossing.assign(static_cast<size_t>(npts) - 1, 0);

  for (int k = 0; k < npts; ++k)
    if (decs[static_cast<size_t>(k)].min_gap < opts.gap_floor)
      throw DegenerateCrossing(grid[k], decs[static_cast<size_t>(k)].min_gap, opts.gap_floor);

  out.values[0] = decs[0].values;
  out.frames[0] = decs[0].vectors;

  for (int k = 1; k < npts; ++k) {
    const ComplexMatrix& prev = out.frames[static_cast<size_t>(k) - 1];
    EigenDecomposition& d = decs[static_cast<size_t>(k)];
    const std::vector<int> perm = match_levels(prev, d.vectors, grid[k]);

    ComplexMatrix fr(out.dim);
    std::vector<double> vals(static_cast<size_t>(out.dim));
    bool reordered = false;
    for (int n = 0; n < out.dim; ++n) {
      const int src = perm[static_cast<size_t>(n)];
      if (src != n) reordered = true;
      vals[static_cast<size_t>(n)] = d.values[static_cast<size_t>(src)];
      // rotate so the overlap with the predecessor is real positive
      cplx ovl{};
      for (int r = 0; r < out.dim; ++r) ovl += std::conj(prev(r, n)) * d.vectors(r, src);
      const cplx fix = std::conj(ovl) / std::abs(ovl);
      for (int r = 0; r < out.dim; ++r) fr(r, n) = d.vectors(r, src) * fix;
    }
    // a reordering means the matched curves left ascending order: a crossing
    // of eigenvalue curves inside the interval
    if (reordered) out.crossing[static_cast<size_t>(k) - 1] = 1;
    out.values[static_cast<size_t>(k)] = std::move(vals);
    out.frames[static_cast<size_t>(k)] = std::move(fr);
  }
  return out;
}

SpectralFlow gamma_matrix(const EigenFrameSequence& frames, const HamiltonianModel& model,
                          const TrackingOptions& opts) {
  const int npts = frames.grid.size();
  const int dim = frames.dim;

  SpectralFlow flow;
  flow.grid = frames.grid;
  flow.dim = dim;
  flow.zero_floor = opts.zero_floor;
  flow.gamma.assign(static_cast<size_t>(npts), ComplexMatrix(dim));
  flow.theta.assign(static_cast<size_t>(dim) * dim, {});
  flow.delta.assign(static_cast<size_t>(dim) * dim, {});
  flow.mask.assign(static_cast<size_t>(dim) * dim, std::vector<char>(static_cast<size_t>(npts), 0));

  const std::vector<std::vector<State>> dphi = frame_derivatives(frames);
  const bool use_hdot = model.has_hdot();

  double worst_disagreement = 0.0;
  std::exception_ptr eptr = nullptr;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : worst_disagreement) \
    if (opts.exec == ExecutionPolicy::Parallel)
#endif
  for (int k = 0; k < npts; ++k) {
    try {
      ComplexMatrix g(dim);
      ComplexMatrix gb(dim);
      const ComplexMatrix& fr = frames.frames[static_cast<size_t>(k)];
      for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
          cplx s{};
          for (int r = 0; r < dim; ++r)
            s += std::conj(fr(r, n)) * dphi[static_cast<size_t>(m)][static_cast<size_t>(k)][static_cast<size_t>(r)];
          gb(n, m) = cplx(0.0, 1.0) * s;
        }
      // differenced route: enforce the exact structure (Hermitian, real diagonal)
      for (int n = 0; n < dim; ++n) {
        for (int m = n + 1; m < dim; ++m) {
          const cplx avg = 0.5 * (gb(n, m) + std::conj(gb(m, n)));
          gb(n, m) = avg;
          gb(m, n) = std::conj(avg);
        }
        gb(n, n) = gb(n, n).real();
      }

      if (use_hdot) {
        const ComplexMatrix hd = model.hdot(frames.grid[k]);
        for (int n = 0; n < dim; ++n) {
          g(n, n) = gb(n, n);
          for (int m = 0; m < dim; ++m) {
            if (m == n) continue;
            const double gap = frames.value(k, m) - frames.value(k, n);
            if (std::abs(gap) < opts.gap_floor)
              throw DegenerateCrossing(frames.grid[k], std::abs(gap), opts.gap_floor);
            cplx s{};
            for (int r = 0; r < dim; ++r) {
              cplx hrow{};
              for (int c = 0; c < dim; ++c) hrow += hd(r, c) * fr(c, m);
              s += std::conj(fr(r, n)) * hrow;
            }
            g(n, m) = cplx(0.0, 1.0) * s / gap;
            worst_disagreement = std::max(worst_disagreement, std::abs(g(n, m) - gb(n, m)));
          }
        }
      } else {
        g = gb;
      }
      flow.gamma[static_cast<size_t>(k)] = std::move(g);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!eptr) eptr = std::current_exception();
    }
  }
  if (eptr) std::rethrow_exception(eptr);
  if (use_hdot && worst_disagreement > opts.method_disagreement_limit)
    throw StepTooCoarse("analytic and differenced gamma disagree by " +
                        std::to_string(worst_disagreement) + "; refine the grid");

  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) {
      if (n == m) continue;
      auto& mk = flow.mask[static_cast<size_t>(flow.pair_index(n, m))];
      for (int k = 0; k < npts; ++k)
        mk[static_cast<size_t>(k)] = flow.gamma_abs(k, n, m) < opts.zero_floor ? 1 : 0;
    }
  return flow;
}

std::vector<double> theta_phase(SpectralFlow& flow, const EigenFrameSequence& frames, int n, int m) {
  const int npts = flow.grid.size();
  const auto& mask = flow.mask[static_cast<size_t>(flow.pair_index(n, m))];

  std::vector<double> integrand(static_cast<size_t>(npts));
  for (int k = 0; k < npts; ++k)
    integrand[static_cast<size_t>(k)] = frames.value(k, n) - frames.value(k, m) +
                                        flow.gamma[static_cast<size_t>(k)](m, m).real() -
                                        flow.gamma[static_cast<size_t>(k)](n, n).real();
  const std::vector<double> lam = cumulative_integral(flow.grid.points(), integrand);

  std::vector<double> theta(static_cast<size_t>(npts), kNaN);
  constexpr double two_pi = 2.0 * kPi;
  double prev_theta = kNaN, prev_lam = 0.0;
  for (const UnmaskedRun& run : unmasked_runs(mask)) {
    std::vector<double> wrapped(static_cast<size_t>(run.end - run.begin));
    for (int k = run.begin; k < run.end; ++k)
      wrapped[static_cast<size_t>(k - run.begin)] =
          std::arg(flow.gamma[static_cast<size_t>(k)](n, m));
    std::vector<double> arg = unwrap_phases(wrapped, kPi);

    double base = 0.0;
    if (!std::isnan(prev_theta)) {
      // across a masked gap only the integral part is defined; pick the arg
      // branch that keeps theta closest to that continuation
      const double target = prev_theta + (lam[static_cast<size_t>(run.begin)] - prev_lam);
      const double candidate = lam[static_cast<size_t>(run.begin)] + arg[0];
      base = -two_pi * std::round((candidate - target) / two_pi);
    }
    for (int k = run.begin; k < run.end; ++k)
      theta[static_cast<size_t>(k)] =
          lam[static_cast<size_t>(k)] + arg[static_cast<size_t>(k - run.begin)] + base;
    prev_theta = theta[static_cast<size_t>(run.end) - 1];
    prev_lam = lam[static_cast<size_t>(run.end) - 1];
  }

  flow.theta[static_cast<size_t>(flow.pair_index(n, m))] = theta;
  return theta;
}

std::vector<double> geometric_potential(SpectralFlow& flow, int m, int n) {
  const int npts = flow.grid.size();
  const auto& mask = flow.mask[static_cast<size_t>(flow.pair_index(n, m))];
  const auto& x = flow.grid.points();

  std::vector<double> delta(static_cast<size_t>(npts), kNaN);
  for (const UnmaskedRun& run : unmasked_runs(mask)) {
    const int len = run.end - run.begin;
    if (len < 2) continue;  // a lone unmasked point has no phase rate
    std::vector<double> wrapped(static_cast<size_t>(len));
    for (int k = run.begin; k < run.end; ++k)
      wrapped[static_cast<size_t>(k - run.begin)] =
          std::arg(flow.gamma[static_cast<size_t>(k)](n, m));
    const std::vector<double> arg = unwrap_phases(wrapped, kPi);
    std::vector<double> xs(x.begin() + run.begin, x.begin() + run.end);
    const std::vector<double> darg = derivative_series(xs, arg);
    for (int k = run.begin; k < run.end; ++k)
      delta[static_cast<size_t>(k)] = flow.gamma[static_cast<size_t>(k)](m, m).real() -
                                      flow.gamma[static_cast<size_t>(k)](n, n).real() +
                                      darg[static_cast<size_t>(k - run.begin)];
  }

  flow.delta[static_cast<size_t>(flow.pair_index(m, n))] = delta;
  return delta;
}

SpectralFlow compute_flow(const EigenFrameSequence& frames, const HamiltonianModel& model,
                          const TrackingOptions& opts) {
  SpectralFlow flow = gamma_matrix(frames, model, opts);
  std::vector<std::pair<int, int>> pairs;
  for (int n = 0; n < flow.dim; ++n)
    for (int m = 0; m < flow.dim; ++m)
      if (n != m) pairs.emplace_back(n, m);

  std::exception_ptr eptr = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (opts.exec == ExecutionPolicy::Parallel)
#endif
  for (long i = 0; i < static_cast<long>(pairs.size()); ++i) {
    try {
      const auto [n, m] = pairs[static_cast<size_t>(i)];
      theta_phase(flow, frames, n, m);
      geometric_potential(flow, m, n);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!eptr) eptr = std::current_exception();
    }
  }
  if (eptr) std::rethrow_exception(eptr);
  return flow;
}

std::vector<State> adiabatic_orbit(const EigenFrameSequence& frames, const SpectralFlow& flow,
                                   int m) {
  const int npts = frames.grid.size();
  std::vector<double> integrand(static_cast<size_t>(npts));
  for (int k = 0; k < npts; ++k)
    integrand[static_cast<size_t>(k)] =
        frames.value(k, m) - flow.gamma[static_cast<size_t>(k)](m, m).real();
  const std::vector<double> phase = cumulative_integral(frames.grid.points(), integrand);

  std::vector<State> orbit(static_cast<size_t>(npts));
  for (int k = 0; k < npts; ++k) {
    State v = frames.level(k, m);
    const cplx ph = std::polar(1.0, -phase[static_cast<size_t>(k)]);
    for (auto& c : v) c *= ph;
    orbit[static_cast<size_t>(k)] = std::move(v);
  }
  return orbit;
}

EigenFrameSequence redress(const EigenFrameSequence& frames,
                           const std::vector<std::function<double(double)>>& gauges) {
  EigenFrameSequence out = frames;
  for (int k = 0; k < frames.grid.size(); ++k) {
    const double tau = frames.grid[k];
    for (int n = 0; n < frames.dim; ++n) {
      const cplx ph = std::polar(1.0, gauges[static_cast<size_t>(n)](tau));
      for (int r = 0; r < frames.dim; ++r)
        out.frames[static_cast<size_t>(k)](r, n) = frames.frames[static_cast<size_t>(k)](r, n) * ph;
    }
  }
  return out;
}

std::vector<std::pair<double, double>> masked_spans(const SpectralFlow& flow, int n, int m) {
  const auto& mask = flow.mask[static_cast<size_t>(flow.pair_index(n, m))];
  std::vector<std::pair<double, double>> spans;
  const int npts = flow.grid.size();
  int k = 0;
  while (k < npts) {
    while (k < npts && !mask[static_cast<size_t>(k)]) ++k;
    if (k >= npts) break;
    const int b = k;
    while (k < npts && mask[static_cast<size_t>(k)]) ++k;
    spans.emplace_back(flow.grid[b], flow.grid[k - 1]);
  }
  return spans;
}

}  // namespace adia
