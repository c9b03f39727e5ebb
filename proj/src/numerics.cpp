#include "adia/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "adia/errors.hpp"

namespace adia {

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= max_depth)
    throw QuadratureFailure("adaptive Simpson did not converge to tolerance at max depth");
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

std::vector<double> fornberg_weights(double x0, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(x.size(), std::vector<double>(static_cast<size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<size_t>(i)][static_cast<size_t>(k)] =
              c1 * (k * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                    c5 * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) / c2;
        c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<size_t>(j)][static_cast<size_t>(k)] =
            (c4 * c[static_cast<size_t>(j)][static_cast<size_t>(k)] -
             k * c[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) / c3;
      c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (size_t j = 0; j < x.size(); ++j) w[j] = c[j][static_cast<size_t>(m)];
  return w;
}

// 5-point sliding stencil; callers guarantee x.size() >= 3 (TimeGrid minimum).
std::vector<double> derivative_series(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  const int width = std::min(5, n);
  std::vector<double> out(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    int lo = std::clamp(k - width / 2, 0, n - width);
    std::vector<double> nodes(x.begin() + lo, x.begin() + lo + width);
    const std::vector<double> w = fornberg_weights(x[static_cast<size_t>(k)], nodes, 1);
    double d = 0.0;
    for (int j = 0; j < width; ++j) d += w[static_cast<size_t>(j)] * y[static_cast<size_t>(lo + j)];
    out[static_cast<size_t>(k)] = d;
  }
  return out;
}

std::vector<double> cumulative_integral(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  const std::vector<double> yp = derivative_series(x, y);
  std::vector<double> out(n, 0.0);
  for (size_t k = 0; k + 1 < n; ++k) {
    const double h = x[k + 1] - x[k];
    // cubic-Hermite quadrature over one interval
    out[k + 1] = out[k] + 0.5 * h * (y[k] + y[k + 1]) + h * h / 12.0 * (yp[k] - yp[k + 1]);
  }
  return out;
}

std::vector<double> unwrap_phases(const std::vector<double>& wrapped, double max_step_jump) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  std::vector<double> out(wrapped.size());
  if (wrapped.empty()) return out;
  out[0] = wrapped[0];
  for (size_t k = 1; k < wrapped.size(); ++k) {
    double d = wrapped[k] - wrapped[k - 1];
    d -= two_pi * std::round(d / two_pi);
    if (std::abs(d) > max_step_jump)
      throw StepTooCoarse("phase increment " + std::to_string(std::abs(d)) +
                          " exceeds per-step limit " + std::to_string(max_step_jump));
    out[k] = out[k - 1] + d;
  }
  return out;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 4) throw std::invalid_argument("tabulated schedule needs at least 4 points");
  for (size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("tabulated schedule grid must be strictly increasing");
  // natural spline: solve the tridiagonal system for second derivatives
  m_.assign(n, 0.0);
  std::vector<double> diag(n, 1.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    sub[i] = hl / 6.0;
    diag[i] = (hl + hr) / 3.0;
    sup[i] = hr / 6.0;
    rhs[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
  }
  for (size_t i = 2; i + 1 < n; ++i) {
    const double f = sub[i] / diag[i - 1];
    diag[i] -= f * sup[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  for (size_t i = n - 2; i >= 1; --i) {
    m_[i] = (rhs[i] - sup[i] * (i + 2 < n ? m_[i + 1] : 0.0)) / diag[i];
    if (i == 1) break;
  }
}

int CubicSpline::interval(double t) const {
  if (t < x_.front() || t > x_.back())
    throw std::out_of_range("tabulated schedule evaluated outside its grid");
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  int i = static_cast<int>(it - x_.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
}

double CubicSpline::value(double t) const {
  const int i = interval(t);
  const double h = x_[static_cast<size_t>(i) + 1] - x_[static_cast<size_t>(i)];
  const double a = (x_[static_cast<size_t>(i) + 1] - t) / h;
  const double b = (t - x_[static_cast<size_t>(i)]) / h;
  return a * y_[static_cast<size_t>(i)] + b * y_[static_cast<size_t>(i) + 1] +
         ((a * a * a - a) * m_[static_cast<size_t>(i)] + (b * b * b - b) * m_[static_cast<size_t>(i) + 1]) *
             h * h / 6.0;
}

double CubicSpline::derivative(double t) const {
  const int i = interval(t);
  const double h = x_[static_cast<size_t>(i) + 1] - x_[static_cast<size_t>(i)];
  const double a = (x_[static_cast<size_t>(i) + 1] - t) / h;
  const double b = (t - x_[static_cast<size_t>(i)]) / h;
  return (y_[static_cast<size_t>(i) + 1] - y_[static_cast<size_t>(i)]) / h -
         (3.0 * a * a - 1.0) / 6.0 * h * m_[static_cast<size_t>(i)] +
         (3.0 * b * b - 1.0) / 6.0 * h * m_[static_cast<size_t>(i) + 1];
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;

using CVec = std::vector<std::complex<double>>;

void axpy(CVec& out, const CVec& y, double h, std::initializer_list<std::pair<double, const CVec*>> ks) {
  out = y;
  for (const auto& [c, k] : ks)
    for (size_t i = 0; i < y.size(); ++i) out[i] += h * c * (*k)[i];
}

}  // namespace

std::vector<CVec> integrate_ode45(const OdeRhs& f, CVec y0, const std::vector<double>& output_times,
                                  double rel_tol, double abs_tol) {
  const size_t dim = y0.size();
  std::vector<CVec> out;
  out.reserve(output_times.size());
  out.push_back(y0);

  CVec y = std::move(y0);
  CVec k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ytmp(dim), y5(dim);
  double t = output_times.front();
  const double span = output_times.back() - output_times.front();
  double h = span > 0.0 ? span / 100.0 : 0.0;
  bool have_k1 = false;
  long steps = 0;

  for (size_t target = 1; target < output_times.size(); ++target) {
    const double t_end = output_times[target];
    while (t < t_end) {
      if (++steps > 50'000'000) throw NoConvergence("coefficient ODE exceeded the step budget");
      h = std::min(h, t_end - t);
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw NoConvergence("coefficient ODE step size underflow");
      if (!have_k1) f(t, y, k1);
      axpy(ytmp, y, h, {{kA21, &k1}});
      f(t + kC2 * h, ytmp, k2);
      axpy(ytmp, y, h, {{kA31, &k1}, {kA32, &k2}});
      f(t + kC3 * h, ytmp, k3);
      axpy(ytmp, y, h, {{kA41, &k1}, {kA42, &k2}, {kA43, &k3}});
      f(t + kC4 * h, ytmp, k4);
      axpy(ytmp, y, h, {{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}});
      f(t + kC5 * h, ytmp, k5);
      axpy(ytmp, y, h, {{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}});
      f(t + h, ytmp, k6);
      axpy(y5, y, h, {{kB1, &k1}, {kB3, &k3}, {kB4, &k4}, {kB5, &k5}, {kB6, &k6}});
      f(t + h, y5, k7);

      double err = 0.0;
      for (size_t i = 0; i < dim; ++i) {
        const std::complex<double> e =
            h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
        const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      if (err <= 1.0) {
        t += h;
        y.swap(y5);
        k1.swap(k7);  // FSAL
        have_k1 = true;
      }
      const double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::clamp(factor, 0.2, 5.0);
    }
    out.push_back(y);
    t = t_end;
  }
  return out;
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace adia
