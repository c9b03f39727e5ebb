#ifndef ADIA_DYNAMICS_HPP
#define ADIA_DYNAMICS_HPP

#include <vector>

#include "adia/models.hpp"
#include "adia/spectral.hpp"
#include "adia/time_grid.hpp"

namespace adia {

struct Trajectory {
  TimeGrid grid;
  std::vector<State> states;  // unit norm, states[0] = psi0
};

struct IntegratorOptions {
  double refine_tol = 1e-9;  // max state distance between successive refinements
  int max_depth = 20;
  bool rk4_cross_check = false;  // classic RK4 instead of the unitary stepper
};

// Propagate i dpsi/dtau = h(tau) psi across the grid with unitary
// exponential-midpoint substeps, halving the substep until two refinements
// agree to refine_tol at every grid point.
Trajectory integrate_schrodinger(const HamiltonianModel& model, const State& psi0,
                                 const TimeGrid& grid, const IntegratorOptions& opts = {});

// M_mn = |gamma_mn| e^{i theta_mn}, zero diagonal. Masked points are exact
// zeros (the magnitude sits below zero_floor there). The polar components
// are kept alongside the samples so the coefficient ODE can interpolate the
// slowly varying magnitude and unwrapped phase instead of the oscillation.
struct MMatrixSeries {
  TimeGrid grid;
  int dim = 0;
  std::vector<ComplexMatrix> m;              // [k]
  std::vector<std::vector<double>> mag;      // [pair(p,q)][k]
  std::vector<std::vector<double>> phase;    // [pair(p,q)][k], NaN where masked
  int pair_index(int p, int q) const { return p * dim + q; }
};

MMatrixSeries build_m_series(const SpectralFlow& flow, const EigenFrameSequence& frames);

struct CoefficientSeries {
  TimeGrid grid;
  std::vector<std::vector<cplx>> c;  // [k][n]
};

// dc_m/dtau = i sum_{n != m} c_n M_mn with cubic-interpolated M (magnitude
// and unwrapped phase per pair), Dormand-Prince 4(5) at rel_tol.
CoefficientSeries integrate_coefficients(const MMatrixSeries& m, int initial_level,
                                         double rel_tol = 1e-10);

// c_n(tau_k) = <orbit_n(tau_k) | psi(tau_k)>; orbits indexed [n][k].
CoefficientSeries project_onto_adiabatic(const Trajectory& traj,
                                         const std::vector<std::vector<State>>& orbits);

// P_m(tau_k) = |c_m(tau_k)|^2.
std::vector<double> survival_probability(const CoefficientSeries& c, int m);

// First-order perturbative survival: 1 - sum_{n != m} |int_0^tau |gamma_nm| e^{i theta_nm}|^2,
// cumulative trapezoid on the complex integrand. The per-step phase increment
// must stay below pi/4 (StepTooCoarse otherwise).
std::vector<double> first_order_survival(const SpectralFlow& flow, const EigenFrameSequence& frames,
                                         int m);

}  // namespace adia

#endif
