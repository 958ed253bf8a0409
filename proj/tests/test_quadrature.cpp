#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sfavg/quadrature.hpp"

using namespace sfavg;

namespace {

// Independent oracle: dense trapezoid over +-10 standard deviations.
double trapezoid_gaussian_mean(const std::function<double(double)>& f, double mean,
                               double var) {
  const int n = 400001;
  const double sd = std::sqrt(var);
  const double lo = mean - 10.0 * sd, hi = mean + 10.0 * sd;
  const double h = (hi - lo) / double(n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + h * double(i);
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    const double z = (x - mean) / sd;
    acc += w * f(x) * std::exp(-0.5 * z * z);
  }
  return acc * h / (sd * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("gauss_legendre01: exactness on polynomials") {
  const auto r2 = gauss_legendre01(2);
  double s = 0.0, cube = 0.0;
  for (int i = 0; i < 2; ++i) {
    s += r2.weights[std::size_t(i)];
    cube += r2.weights[std::size_t(i)] * std::pow(r2.nodes[std::size_t(i)], 3);
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cube == doctest::Approx(0.25).epsilon(1e-13));

  const auto r5 = gauss_legendre01(5);
  double nine = 0.0;
  for (int i = 0; i < 5; ++i)
    nine += r5.weights[std::size_t(i)] * std::pow(r5.nodes[std::size_t(i)], 9);
  CHECK(nine == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("gauss_hermite: weight sums and Gaussian moments") {
  for (int n : {7, 16, 40, 48, 96}) {
    const auto r = gauss_hermite(n);
    double s0 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      s0 += r.weights[std::size_t(i)];
      s2 += r.weights[std::size_t(i)] * r.nodes[std::size_t(i)] * r.nodes[std::size_t(i)];
    }
    CHECK(s0 == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(s2 == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-12));
  }
}

TEST_CASE("gauss_hermite_mean: normal moments") {
  const double m = 0.3, v = 0.17;
  CHECK(gauss_hermite_mean([](double z) { return z; }, m, v, 40) ==
        doctest::Approx(m).epsilon(1e-13));
  CHECK(gauss_hermite_mean([m](double z) { return (z - m) * (z - m); }, m, v, 40) ==
        doctest::Approx(v).epsilon(1e-13));
  CHECK(gauss_hermite_mean([m](double z) { return std::pow(z - m, 4); }, m, v, 40) ==
        doctest::Approx(3.0 * v * v).epsilon(1e-12));
}

TEST_CASE("gauss_hermite_mean: E tanh against the dense trapezoid oracle") {
  auto f = [](double z) { return std::tanh(z); };
  for (double m : {0.0, 0.4, -1.2}) {
    for (double v : {0.05, 0.2, 0.8}) {
      const double gh = gauss_hermite_mean(f, m, v, 48);
      const double oracle = trapezoid_gaussian_mean(f, m, v);
      CHECK(gh == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("gauss_hermite_mean: doubling nodes changes the result below 1e-10") {
  auto f = [](double z) { return std::tanh(z); };
  const double a = gauss_hermite_mean(f, 0.35, 0.25, 48);
  const double b = gauss_hermite_mean(f, 0.35, 0.25, 96);
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("gauss_hermite_mean: zero variance short-circuits to f(mean)") {
  CHECK(gauss_hermite_mean([](double z) { return z * z; }, 2.0, 0.0, 40) == 4.0);
}
