#ifndef ADIA_NUMERICS_HPP
#define ADIA_NUMERICS_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace adia {

// Adaptive Simpson quadrature, absolute tolerance. Throws QuadratureFailure
// if the recursion hits max_depth before reaching tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40);

// Finite-difference weights for the m-th derivative at x0 on arbitrary nodes
// (Fornberg's recursion). nodes.size() >= m + 1.
std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int m);

// d/dx of a sampled series using 5-point stencils (4th order on uniform
// grids, graceful on nonuniform ones; one-sided at the ends).
std::vector<double> derivative_series(const std::vector<double>& x, const std::vector<double>& y);

// Cumulative integral of a sampled series by cubic-Hermite quadrature with
// finite-difference slopes: I[0] = 0, 4th-order accurate on smooth data.
std::vector<double> cumulative_integral(const std::vector<double>& x, const std::vector<double>& y);

// Unwrap phases within one contiguous run: each increment is shifted by a
// multiple of 2*pi into (-pi, pi]. Throws StepTooCoarse if an increment's
// principal value exceeds max_step_jump.
std::vector<double> unwrap_phases(const std::vector<double>& wrapped, double max_step_jump);

// Natural cubic spline on a strictly increasing grid; evaluation outside the
// table throws (extrapolation is an error, not a guess).
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double value(double t) const;
  double derivative(double t) const;
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  int interval(double t) const;
  std::vector<double> x_, y_, m_;  // m_: second derivatives
};

// Dormand-Prince 5(4) adaptive step for a complex-vector ODE y' = f(t, y).
// Records the solution at every requested output time.
using OdeRhs = std::function<void(double, const std::vector<std::complex<double>>&,
                                  std::vector<std::complex<double>>&)>;
std::vector<std::vector<std::complex<double>>> integrate_ode45(
    const OdeRhs& f, std::vector<std::complex<double>> y0,
    const std::vector<double>& output_times, double rel_tol, double abs_tol = 1e-12);

// Fixed scientific formatting with 17 significant digits: the CSV contract.
std::string format17(double v);

}  // namespace adia

#endif
