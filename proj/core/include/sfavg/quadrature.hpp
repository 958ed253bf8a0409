#pragma once

#include <functional>
#include <vector>

namespace sfavg {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0,1]; exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_legendre01(int n);

/// n-point Gauss-Hermite rule for the weight e^{-x^2} on the real line
/// (physicists' convention): integral f(x) e^{-x^2} dx = sum w_i f(x_i).
QuadratureRule gauss_hermite(int n);

/// E[f(Z)] for Z ~ Normal(mean, var), via n-node Gauss-Hermite.
double gauss_hermite_mean(const std::function<double(double)>& f, double mean, double var,
                          int n);

}  // namespace sfavg
