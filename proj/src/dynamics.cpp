#include "adia/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adia/errors.hpp"
#include "adia/numerics.hpp"

namespace adia {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Unitary exponential-midpoint stepper with reusable buffers.
class MidpointStepper {
 public:
  explicit MidpointStepper(int dim)
      : h_(dim), work_(dim), vecs_(dim), w_(static_cast<size_t>(dim)), out_(static_cast<size_t>(dim)) {}

  void step(const HamiltonianModel& model, double t_mid, double dt, State& psi) {
    model.h_into(t_mid, h_);
    work_ = h_;
    eigh_inplace(work_, vals_, vecs_, false);
    const int n = h_.dim();
    for (int i = 0; i < n; ++i) {
      cplx s{};
      for (int r = 0; r < n; ++r) s += std::conj(vecs_(r, i)) * psi[static_cast<size_t>(r)];
      w_[static_cast<size_t>(i)] = s * std::polar(1.0, -vals_[static_cast<size_t>(i)] * dt);
    }
    for (int r = 0; r < n; ++r) {
      cplx s{};
      for (int i = 0; i < n; ++i) s += vecs_(r, i) * w_[static_cast<size_t>(i)];
      out_[static_cast<size_t>(r)] = s;
    }
    psi.swap(out_);
  }

 private:
  ComplexMatrix h_, work_, vecs_;
  std::vector<double> vals_;
  State w_, out_;
};

class Rk4Stepper {
 public:
  explicit Rk4Stepper(int dim)
      : h_(dim), k1_(static_cast<size_t>(dim)), k2_(k1_), k3_(k1_), k4_(k1_), tmp_(k1_) {}

  void rhs(const HamiltonianModel& model, double t, const State& y, State& dy) {
    model.h_into(t, h_);
    const int n = h_.dim();
    for (int r = 0; r < n; ++r) {
      cplx s{};
      for (int c = 0; c < n; ++c) s += h_(r, c) * y[static_cast<size_t>(c)];
      dy[static_cast<size_t>(r)] = cplx(0.0, -1.0) * s;
    }
  }

  void step(const HamiltonianModel& model, double t, double dt, State& psi) {
    const size_t n = psi.size();
    rhs(model, t, psi, k1_);
    for (size_t i = 0; i < n; ++i) tmp_[i] = psi[i] + 0.5 * dt * k1_[i];
    rhs(model, t + 0.5 * dt, tmp_, k2_);
    for (size_t i = 0; i < n; ++i) tmp_[i] = psi[i] + 0.5 * dt * k2_[i];
    rhs(model, t + 0.5 * dt, tmp_, k3_);
    for (size_t i = 0; i < n; ++i) tmp_[i] = psi[i] + dt * k3_[i];
    rhs(model, t + dt, tmp_, k4_);
    for (size_t i = 0; i < n; ++i)
      psi[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  ComplexMatrix h_;
  State k1_, k2_, k3_, k4_, tmp_;
};

std::vector<State> propagate_on_grid(const HamiltonianModel& model, const State& psi0,
                                     const TimeGrid& grid, int substeps, bool rk4) {
  const int npts = grid.size();
  std::vector<State> states(static_cast<size_t>(npts));
  states[0] = psi0;
  State psi = psi0;
  MidpointStepper mid(model.dim());
  Rk4Stepper rk(model.dim());
  for (int k = 0; k + 1 < npts; ++k) {
    const double dt = grid.step(k) / substeps;
    for (int j = 0; j < substeps; ++j) {
      const double t0 = grid[k] + j * dt;
      if (rk4)
        rk.step(model, t0, dt, psi);
      else
        mid.step(model, t0 + 0.5 * dt, dt, psi);
    }
    states[static_cast<size_t>(k) + 1] = psi;
  }
  return states;
}

double max_state_distance(const std::vector<State>& a, const std::vector<State>& b) {
  double worst = 0.0;
  for (size_t k = 0; k < a.size(); ++k) worst = std::max(worst, state_distance(a[k], b[k]));
  return worst;
}

// Piecewise-cubic Hermite evaluation of a sampled series.
class HermiteSeries {
 public:
  HermiteSeries(const std::vector<double>& x, std::vector<double> y)
      : x_(&x), y_(std::move(y)), yp_(derivative_series(x, y_)) {}

  double eval(double t) const {
    const auto& x = *x_;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    int i = std::clamp(static_cast<int>(it - x.begin()) - 1, 0, static_cast<int>(x.size()) - 2);
    const double h = x[static_cast<size_t>(i) + 1] - x[static_cast<size_t>(i)];
    const double s = (t - x[static_cast<size_t>(i)]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[static_cast<size_t>(i)] +
           (s3 - 2 * s2 + s) * h * yp_[static_cast<size_t>(i)] +
           (-2 * s3 + 3 * s2) * y_[static_cast<size_t>(i) + 1] +
           (s3 - s2) * h * yp_[static_cast<size_t>(i) + 1];
  }

 private:
  const std::vector<double>* x_;
  std::vector<double> y_;
  std::vector<double> yp_;
};

}  // namespace

Trajectory integrate_schrodinger(const HamiltonianModel& model, const State& psi0,
                                 const TimeGrid& grid, const IntegratorOptions& opts) {
  if (std::abs(norm(psi0) - 1.0) > 1e-9)
    throw std::invalid_argument("initial state must be normalized to 1e-9");
  if (grid.back() > model.horizon() * (1.0 + 1e-12))
    throw std::invalid_argument("grid extends past the model horizon");

  std::vector<State> coarse = propagate_on_grid(model, psi0, grid, 1, opts.rk4_cross_check);
  for (int depth = 1; depth <= opts.max_depth; ++depth) {
    std::vector<State> fine =
        propagate_on_grid(model, psi0, grid, 1 << depth, opts.rk4_cross_check);
    if (max_state_distance(coarse, fine) <= opts.refine_tol) {
      Trajectory out;
      out.grid = grid;
      out.states = std::move(fine);
      return out;
    }
    coarse = std::move(fine);
  }
  throw NoConvergence("step-halving refinement stalled before the state tolerance");
}

MMatrixSeries build_m_series(const SpectralFlow& flow0, const EigenFrameSequence& frames) {
  SpectralFlow flow = flow0;  // fill any phases the caller has not computed yet
  for (int p = 0; p < flow.dim; ++p)
    for (int q = 0; q < flow.dim; ++q)
      if (p != q && !flow.has_theta(p, q)) theta_phase(flow, frames, p, q);

  const int npts = flow.grid.size();
  MMatrixSeries out;
  out.grid = flow.grid;
  out.dim = flow.dim;
  out.m.assign(static_cast<size_t>(npts), ComplexMatrix(flow.dim));
  out.mag.assign(static_cast<size_t>(flow.dim) * flow.dim,
                 std::vector<double>(static_cast<size_t>(npts), 0.0));
  out.phase.assign(static_cast<size_t>(flow.dim) * flow.dim,
                   std::vector<double>(static_cast<size_t>(npts), kNaN));

  for (int p = 0; p < flow.dim; ++p)
    for (int q = 0; q < flow.dim; ++q) {
      if (p == q) continue;
      const auto& theta = flow.theta[static_cast<size_t>(flow.pair_index(p, q))];
      auto& mag = out.mag[static_cast<size_t>(out.pair_index(p, q))];
      auto& phase = out.phase[static_cast<size_t>(out.pair_index(p, q))];
      for (int k = 0; k < npts; ++k) {
        if (flow.masked(k, p, q)) continue;  // masked points stay exact zeros
        mag[static_cast<size_t>(k)] = flow.gamma_abs(k, p, q);
        phase[static_cast<size_t>(k)] = theta[static_cast<size_t>(k)];
        out.m[static_cast<size_t>(k)](p, q) =
            std::polar(mag[static_cast<size_t>(k)], phase[static_cast<size_t>(k)]);
      }
    }
  return out;
}

CoefficientSeries integrate_coefficients(const MMatrixSeries& m, int initial_level,
                                         double rel_tol) {
  const int dim = m.dim;
  const int npts = m.grid.size();
  if (initial_level < 0 || initial_level >= dim)
    throw std::invalid_argument("initial level out of range");

  // cubic interpolants of magnitude and unwrapped phase per coupled pair;
  // fully masked pairs contribute nothing
  struct PairInterp {
    int p, q;
    HermiteSeries mag;
    HermiteSeries phase;
  };
  std::vector<PairInterp> pairs;
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q) {
      if (p == q) continue;
      const auto& mag = m.mag[static_cast<size_t>(m.pair_index(p, q))];
      const auto& ph = m.phase[static_cast<size_t>(m.pair_index(p, q))];
      if (std::all_of(mag.begin(), mag.end(), [](double v) { return v == 0.0; })) continue;
      // phase interpolation needs a NaN-free series: carry the nearest known
      // value across masked points (the magnitude vanishes there anyway)
      std::vector<double> filled(ph);
      size_t first_set = filled.size();
      for (size_t k = 0; k < filled.size(); ++k)
        if (!std::isnan(filled[k])) {
          first_set = k;
          break;
        }
      for (size_t k = 0; k < first_set; ++k) filled[k] = filled[first_set];
      for (size_t k = first_set + 1; k < filled.size(); ++k)
        if (std::isnan(filled[k])) filled[k] = filled[k - 1];
      pairs.push_back({p, q, HermiteSeries(m.grid.points(), mag),
                       HermiteSeries(m.grid.points(), std::move(filled))});
    }

  const OdeRhs rhs = [&](double t, const std::vector<cplx>& c, std::vector<cplx>& dc) {
    std::fill(dc.begin(), dc.end(), cplx{});
    for (const auto& pr : pairs) {
      const double mg = std::max(0.0, pr.mag.eval(t));
      if (mg == 0.0) continue;
      const cplx mpq = std::polar(mg, pr.phase.eval(t));
      dc[static_cast<size_t>(pr.p)] += cplx(0.0, 1.0) * c[static_cast<size_t>(pr.q)] * mpq;
    }
  };

  std::vector<cplx> c0(static_cast<size_t>(dim), cplx{});
  c0[static_cast<size_t>(initial_level)] = 1.0;
  std::vector<std::vector<cplx>> series = integrate_ode45(rhs, std::move(c0), m.grid.points(), rel_tol);

  CoefficientSeries out;
  out.grid = m.grid;
  out.c = std::move(series);
  for (int k = 0; k < npts; ++k) {
    double s = 0.0;
    for (const auto& v : out.c[static_cast<size_t>(k)]) s += std::norm(v);
    if (std::abs(s - 1.0) > 1e-8)
      throw NoConvergence("coefficient normalization drifted beyond 1e-8");
  }
  return out;
}

CoefficientSeries project_onto_adiabatic(const Trajectory& traj,
                                         const std::vector<std::vector<State>>& orbits) {
  const size_t npts = traj.states.size();
  const size_t dim = traj.states.front().size();
  if (orbits.size() != dim) throw GridMismatch("orbit count does not match the state dimension");
  for (const auto& orbit : orbits)
    if (orbit.size() != npts) throw GridMismatch("orbit series length does not match the grid");

  CoefficientSeries out;
  out.grid = traj.grid;
  out.c.assign(npts, std::vector<cplx>(dim));
  for (size_t k = 0; k < npts; ++k)
    for (size_t n = 0; n < dim; ++n) out.c[k][n] = inner(orbits[n][k], traj.states[k]);
  return out;
}

std::vector<double> survival_probability(const CoefficientSeries& c, int m) {
  std::vector<double> p(c.c.size());
  for (size_t k = 0; k < c.c.size(); ++k) p[k] = std::norm(c.c[k][static_cast<size_t>(m)]);
  return p;
}

std::vector<double> first_order_survival(const SpectralFlow& flow0,
                                         const EigenFrameSequence& frames, int m) {
  SpectralFlow flow = flow0;
  for (int n = 0; n < flow.dim; ++n)
    if (n != m && !flow.has_theta(n, m)) theta_phase(flow, frames, n, m);

  const int npts = flow.grid.size();
  const auto& x = flow.grid.points();
  std::vector<double> total(static_cast<size_t>(npts), 0.0);  // sum over n of |I_n(tau)|^2

  for (int n = 0; n < flow.dim; ++n) {
    if (n == m) continue;
    const auto& theta = flow.theta[static_cast<size_t>(flow.pair_index(n, m))];
    std::vector<cplx> integrand(static_cast<size_t>(npts), cplx{});
    for (int k = 0; k < npts; ++k)
      if (!flow.masked(k, n, m))
        integrand[static_cast<size_t>(k)] =
            std::polar(flow.gamma_abs(k, n, m), theta[static_cast<size_t>(k)]);

    cplx acc{};
    for (int k = 0; k + 1 < npts; ++k) {
      const bool both = !flow.masked(k, n, m) && !flow.masked(k + 1, n, m);
      if (both) {
        const double dtheta =
            std::abs(theta[static_cast<size_t>(k) + 1] - theta[static_cast<size_t>(k)]);
        if (dtheta >= kPi / 4.0)
          throw StepTooCoarse("oscillatory integrand advances " + std::to_string(dtheta) +
                              " rad per step; refine the grid below pi/4");
      }
      acc += 0.5 * (x[static_cast<size_t>(k) + 1] - x[static_cast<size_t>(k)]) *
             (integrand[static_cast<size_t>(k)] + integrand[static_cast<size_t>(k) + 1]);
      total[static_cast<size_t>(k) + 1] += std::norm(acc);
    }
  }

  std::vector<double> p(static_cast<size_t>(npts));
  for (int k = 0; k < npts; ++k) p[static_cast<size_t>(k)] = 1.0 - total[static_cast<size_t>(k)];
  return p;
}

}  // namespace adia
