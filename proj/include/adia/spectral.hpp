#ifndef ADIA_SPECTRAL_HPP
#define ADIA_SPECTRAL_HPP

#include <functional>
#include <utility>
#include <vector>

#include "adia/linalg.hpp"
#include "adia/models.hpp"
#include "adia/time_grid.hpp"

namespace adia {

struct TrackingOptions {
  double gap_floor = 1e-8;    // minimum admissible eigenvalue gap on the grid
  double zero_floor = 1e-12;  // |gamma_nm| below this masks phase quantities
  ExecutionPolicy exec = ExecutionPolicy::Parallel;
  double hermitian_tol = 1e-12;
  double method_disagreement_limit = 1e-3;  // A/B cross-check -> StepTooCoarse
};

// Instantaneous eigenframes along the grid, gauge-fixed so that successive
// overlaps <phi_n(k)|phi_n(k+1)> are real positive. Level curves are matched
// across steps by maximum overlap, not by sort order; `crossing[k]` marks an
// interval where the matched values left ascending order.
struct EigenFrameSequence {
  TimeGrid grid;
  int dim = 0;
  std::vector<std::vector<double>> values;  // [k][n]
  std::vector<ComplexMatrix> frames;        // [k], columns are levels
  std::vector<char> crossing;               // per interval, size()-1 entries

  const double& value(int k, int n) const { return values[static_cast<size_t>(k)][static_cast<size_t>(n)]; }
  State level(int k, int n) const { return frames[static_cast<size_t>(k)].column(n); }
};

// gamma_nm = i <phi_n | d phi_m / dtau> on the grid, plus the derived
// unwrapped phases theta_nm and geometric potentials Delta_mn (filled lazily
// by theta_phase / geometric_potential, or all at once by compute_flow).
struct SpectralFlow {
  TimeGrid grid;
  int dim = 0;
  double zero_floor = 1e-12;
  std::vector<ComplexMatrix> gamma;        // [k]
  std::vector<std::vector<double>> theta;  // [pair(n,m)][k], NaN where masked
  std::vector<std::vector<double>> delta;  // [pair(m,n)][k], NaN where masked
  std::vector<std::vector<char>> mask;     // [pair(n,m)][k]

  int pair_index(int n, int m) const { return n * dim + m; }
  bool has_theta(int n, int m) const { return !theta[static_cast<size_t>(pair_index(n, m))].empty(); }
  bool has_delta(int m, int n) const { return !delta[static_cast<size_t>(pair_index(m, n))].empty(); }
  double gamma_abs(int k, int n, int m) const { return std::abs(gamma[static_cast<size_t>(k)](n, m)); }
  bool masked(int k, int n, int m) const { return mask[static_cast<size_t>(pair_index(n, m))][static_cast<size_t>(k)] != 0; }
};

EigenFrameSequence track_frames(const HamiltonianModel& model, const TimeGrid& grid,
                                const TrackingOptions& opts = {});

// gamma on every grid point. With an analytic hdot the off-diagonals come
// from i<phi_n|hdot|phi_m>/(e_m - e_n) and the diagonals from differenced
// vectors; otherwise everything is differenced (5-point stencils). When both
// routes exist they are cross-checked.
SpectralFlow gamma_matrix(const EigenFrameSequence& frames, const HamiltonianModel& model,
                          const TrackingOptions& opts = {});

// Unwrapped theta_nm = int_0^tau (e_n - e_m + gamma_mm - gamma_nn) + arg gamma_nm.
// Stores the series in `flow` and returns it; NaN at masked points.
std::vector<double> theta_phase(SpectralFlow& flow, const EigenFrameSequence& frames, int n, int m);

// Delta_mn = gamma_mm - gamma_nn + d/dtau arg gamma_nm; NaN at masked points.
std::vector<double> geometric_potential(SpectralFlow& flow, int m, int n);

// gamma plus all theta/Delta pairs.
SpectralFlow compute_flow(const EigenFrameSequence& frames, const HamiltonianModel& model,
                          const TrackingOptions& opts = {});

// U(1)-invariant adiabatic orbit through level m:
// exp(-i int_0^tau [e_m - gamma_mm]) phi_m(tau); unit norm, equals phi_m(0) at 0.
std::vector<State> adiabatic_orbit(const EigenFrameSequence& frames, const SpectralFlow& flow, int m);

// Redress every level with phases exp(i f_n(tau)), f_n(0) = 0: the gauge
// transformation that the orbit and Delta must be invariant under.
EigenFrameSequence redress(const EigenFrameSequence& frames,
                           const std::vector<std::function<double(double)>>& gauges);

// Contiguous tau spans where pair (n,m) is masked.
std::vector<std::pair<double, double>> masked_spans(const SpectralFlow& flow, int n, int m);

}  // namespace adia

#endif
