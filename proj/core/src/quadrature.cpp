#include "sfavg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sfavg {

QuadratureRule gauss_legendre01(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre01: n >= 1 required");
  QuadratureRule rule;
  rule.nodes.resize(std::size_t(n));
  rule.weights.resize(std::size_t(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton on P_n with the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - double(j) * p2) / double(j + 1);
      }
      pp = double(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    // Map [-1,1] -> [0,1].
    rule.nodes[std::size_t(i)] = 0.5 * (1.0 - z);
    rule.nodes[std::size_t(n - 1 - i)] = 0.5 * (1.0 + z);
    const double w = 1.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[std::size_t(i)] = w;
    rule.weights[std::size_t(n - 1 - i)] = w;
  }
  return rule;
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::domain_error("gauss_hermite: n >= 1 required");
  QuadratureRule rule;
  rule.nodes.resize(std::size_t(n));
  rule.weights.resize(std::size_t(n));
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Stroud-Secrest style initial guesses, largest root first.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(double(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[std::size_t(i - 2)];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      // Orthonormal Hermite recurrence keeps values in range for large n.
      double p0 = pim4, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = z * std::sqrt(2.0 / double(j + 1)) * p1 -
             std::sqrt(double(j) / double(j + 1)) * p2;
      }
      pp = std::sqrt(2.0 * n) * p1;
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[std::size_t(i)] = z;
    rule.nodes[std::size_t(n - 1 - i)] = -z;
    rule.weights[std::size_t(i)] = 2.0 / (pp * pp);
    rule.weights[std::size_t(n - 1 - i)] = rule.weights[std::size_t(i)];
  }
  if (n % 2 == 1) rule.nodes[std::size_t(m - 1)] = 0.0;
  return rule;
}

double gauss_hermite_mean(const std::function<double(double)>& f, double mean, double var,
                          int n) {
  if (var < 0.0) throw std::domain_error("gauss_hermite_mean: var must be >= 0");
  if (var == 0.0) return f(mean);
  const QuadratureRule rule = gauss_hermite(n);
  const double s = std::sqrt(2.0 * var);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += rule.weights[std::size_t(i)] * f(mean + s * rule.nodes[std::size_t(i)]);
  return acc / std::sqrt(std::numbers::pi);
}

}  // namespace sfavg
