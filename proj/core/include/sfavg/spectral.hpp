#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sfavg {

/// Coefficient vector in the Dirichlet sine eigenbasis on (0,1),
///   e_k(xi) = sqrt(2) sin(k pi xi),  k = 1..N.
/// The k-th coefficient lives at coeffs[k-1]; modes are 1-indexed throughout.
struct SpectralField {
  std::vector<double> coeffs;

  SpectralField() = default;
  explicit SpectralField(int n) : coeffs(static_cast<std::size_t>(n), 0.0) {}
  explicit SpectralField(std::vector<double> c) : coeffs(std::move(c)) {}

  int basis_size() const { return static_cast<int>(coeffs.size()); }
  double operator[](int k) const { return coeffs[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return coeffs[static_cast<std::size_t>(k)]; }

  /// Plain H = L2(0,1) norm: sqrt(sum of squared coefficients).
  double norm() const;
  bool all_finite() const;
};

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);
double inner(const SpectralField& a, const SpectralField& b);

/// Point samples at the interior collocation nodes xi_j = j/(N+1), j = 1..N.
/// Homogeneous Dirichlet values at xi = 0 and xi = 1 are implied, never stored.
struct GridField {
  std::vector<double> values;

  GridField() = default;
  explicit GridField(int n) : values(static_cast<std::size_t>(n), 0.0) {}
  explicit GridField(std::vector<double> v) : values(std::move(v)) {}

  int grid_size() const { return static_cast<int>(values.size()); }
  bool all_finite() const;
};

/// xi_j = j/(N+1) for j = 1..N.
std::vector<double> collocation_points(int n);

/// Diagonal negative-definite operator given by its eigenvalue law k -> lambda_k
/// on the shared sine basis. The law must be strictly positive and non-decreasing.
class OperatorSpec {
 public:
  /// lambda_k = pi^2 k^2 (second derivative with Dirichlet conditions).
  static OperatorSpec dirichlet_laplacian();
  static OperatorSpec from_law(std::function<double(int)> law, std::string name);

  /// k-th eigenvalue, k >= 1. Throws std::domain_error for k < 1.
  double eigenvalue(int k) const;
  /// Smallest eigenvalue lambda_1.
  double smallest() const { return lambda1_; }
  const std::string& name() const { return name_; }

 private:
  OperatorSpec(std::function<double(int)> law, std::string name);
  std::function<double(int)> law_;
  double lambda1_ = 0.0;
  std::string name_;
};

double eigenvalue(const OperatorSpec& op, int k);

/// e^{tA} x: coefficient k scaled by exp(-lambda_k t). Requires t >= 0.
SpectralField apply_semigroup(const SpectralField& x, const OperatorSpec& op, double t);

/// |x|_{(-A)^a} = (sum_k lambda_k^{2a} x_k^2)^{1/2}, a in [0,1]. a = 0 is the H-norm.
double fractional_norm(const SpectralField& x, const OperatorSpec& op, double a);

/// Synthesis: values at the collocation nodes. Exact inverse of to_spectral.
GridField to_grid(const SpectralField& x);
/// Analysis: sine coefficients from node values (type-I discrete sine transform,
/// normalized so to_spectral(to_grid(x)) == x and the discrete Parseval identity
/// |x|^2 = (1/(N+1)) sum_j v_j^2 holds exactly).
SpectralField to_spectral(const GridField& v);

/// Shared sin((j+1)(k+1)pi/(n+1)) table for size n, cached per n; row j holds
/// the values seen by collocation node j+1. Thread-safe.
const std::vector<double>& sine_table(int n);

}  // namespace sfavg
