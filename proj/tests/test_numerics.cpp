#include <doctest.h>

#include <cmath>
#include <random>

#include "adia/errors.hpp"
#include "adia/numerics.hpp"

using namespace adia;

TEST_CASE("adaptive Simpson integrates smooth functions to the requested tolerance") {
  const double v = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, 2.0, 1e-12);
  CHECK(v == doctest::Approx(1.0 - std::cos(2.0)).epsilon(1e-12));
  const double w = adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 1.0, 1e-12);
  CHECK(w == doctest::Approx(0.7468241328124270).epsilon(1e-11));
}

TEST_CASE("adaptive Simpson reports failure on a hostile integrand") {
  // step discontinuity dense oscillation: forced past max depth at tight tol
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return std::sin(1.0 / (x + 1e-300)); }, 0.0, 1.0,
                                   1e-14, 8),
                  QuadratureFailure);
}

TEST_CASE("Fornberg weights reproduce the classic 5-point central stencil") {
  const std::vector<double> nodes{-2, -1, 0, 1, 2};
  const std::vector<double> w = fornberg_weights(0.0, nodes, 1);
  const std::vector<double> expect{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  for (size_t i = 0; i < w.size(); ++i) CHECK(w[i] == doctest::Approx(expect[i]).epsilon(1e-13));
}

TEST_CASE("derivative_series is 4th order on smooth data") {
  const int n = 200;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[static_cast<size_t>(i)] = 0.05 * i;
    y[static_cast<size_t>(i)] = std::sin(x[static_cast<size_t>(i)]);
  }
  const std::vector<double> d = derivative_series(x, y);
  for (int i = 0; i < n; ++i)
    CHECK(std::abs(d[static_cast<size_t>(i)] - std::cos(x[static_cast<size_t>(i)])) <= 3e-6);
}

TEST_CASE("cumulative_integral is exact on cubics and accurate on sin") {
  const int n = 101;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[static_cast<size_t>(i)] = 0.1 * i;
    y[static_cast<size_t>(i)] = std::sin(x[static_cast<size_t>(i)]);
  }
  const std::vector<double> c = cumulative_integral(x, y);
  CHECK(c[0] == 0.0);
  for (int i = 0; i < n; ++i)
    CHECK(std::abs(c[static_cast<size_t>(i)] - (1.0 - std::cos(x[static_cast<size_t>(i)]))) <=
          3e-7);
}

TEST_CASE("unwrap_phases removes 2pi jumps and rejects oversized steps") {
  std::vector<double> wrapped;
  for (int i = 0; i < 100; ++i) {
    const double phi = 0.4 * i;
    wrapped.push_back(std::atan2(std::sin(phi), std::cos(phi)));
  }
  const std::vector<double> un = unwrap_phases(wrapped, 3.14159);
  for (int i = 0; i < 100; ++i) CHECK(un[static_cast<size_t>(i)] == doctest::Approx(0.4 * i).epsilon(1e-12));

  CHECK_THROWS_AS(unwrap_phases({0.0, 2.0, -2.0}, 1.0), StepTooCoarse);
}

TEST_CASE("natural cubic spline interpolates and refuses extrapolation") {
  std::vector<double> x{0, 1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(v * v);
  const CubicSpline s(x, y);
  CHECK(s.value(2.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(s.value(2.5) == doctest::Approx(6.25).epsilon(2e-2));  // natural BC bends the ends
  CHECK(s.derivative(2.5) == doctest::Approx(5.0).epsilon(2e-2));
  CHECK_THROWS_AS(s.value(5.1), std::out_of_range);
  CHECK_THROWS_AS(s.value(-0.1), std::out_of_range);
}

TEST_CASE("integrate_ode45 solves a phase rotation to tolerance") {
  // y' = i w y, y(0) = 1 -> y(t) = e^{i w t}
  const double w = 2.5;
  const OdeRhs rhs = [w](double, const std::vector<std::complex<double>>& y,
                         std::vector<std::complex<double>>& dy) {
    dy[0] = std::complex<double>(0.0, w) * y[0];
  };
  std::vector<double> times;
  for (int i = 0; i <= 50; ++i) times.push_back(0.2 * i);
  const auto out = integrate_ode45(rhs, {std::complex<double>(1.0, 0.0)}, times, 1e-10);
  REQUIRE(out.size() == times.size());
  for (size_t i = 0; i < times.size(); ++i) {
    const std::complex<double> expect = std::polar(1.0, w * times[i]);
    CHECK(std::abs(out[i][0] - expect) < 1e-8);
  }
}

TEST_CASE("format17 emits fixed 17-significant-digit scientific notation") {
  CHECK(format17(1.0) == "1.0000000000000000e+00");
  CHECK(format17(-0.009900990099009901) == "-9.9009900990099011e-03");
  CHECK(format17(std::nan("")) == "nan");
}
