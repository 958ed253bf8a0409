#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "sfavg/spectral.hpp"

namespace sfavg {

/// A pointwise coefficient produced a non-finite value; the message names the
/// offending collocation point.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pointwise reaction coefficient (xi, x(xi), y(xi)) -> value.
using PointwiseMap = std::function<double(double xi, double x, double y)>;

/// Problem definition: reaction maps, operator spectra, dissipativity metadata.
/// Immutable after construction; all operations on it are pure.
struct ModelSpec {
  std::string name;
  PointwiseMap f;
  PointwiseMap g;

  OperatorSpec op_a = OperatorSpec::dirichlet_laplacian();
  OperatorSpec op_b = OperatorSpec::dirichlet_laplacian();

  /// Declared sup |dg/dy|; negative means undeclared (scan estimate only).
  double g_y_sup = -1.0;
  /// Contraction bonus beyond mu_1 used by burn-in policies (0 if unknown).
  double contraction_bonus = 0.0;

  /// Set when g(xi,x,y) = -kappa*y + forcing(xi,x); enables the Gaussian
  /// invariant-measure oracle.
  bool linear_in_y = false;
  double kappa = 0.0;
  std::function<double(double xi, double x)> forcing;

  /// Evaluate nonlinearities on a 3/2-padded grid (anti-aliasing). Off by default.
  bool dealias = false;
};

/// Collocation (pseudo-spectral) evaluation of the Nemytskii operator
/// F(x,y)(xi) = f(xi, x(xi), y(xi)), returned in spectral coefficients.
SpectralField nemytskii_f(const ModelSpec& m, const SpectralField& x, const SpectralField& y);
SpectralField nemytskii_g(const ModelSpec& m, const SpectralField& x, const SpectralField& y);

/// The potential with U(x,0) = 0: U(x,y) = integral_0^1 <G(x,s y), y> ds,
/// by Gauss-Legendre quadrature in s (exact when g is polynomial in y of
/// degree < 2*quad_points).
double potential_u(const ModelSpec& m, const SpectralField& x, const SpectralField& y,
                   int quad_points);

struct ScanBox {
  double xi_lo = 0.0, xi_hi = 1.0;
  double x_lo = -3.0, x_hi = 3.0;
  double y_lo = -3.0, y_hi = 3.0;
};

struct DissipativityReport {
  bool strict = false;
  /// mu - L_g where mu is the smallest eigenvalue of -B.
  double margin = 0.0;
  double lg_empirical = 0.0;
  double lg_declared = -1.0;
  /// Weak-dissipativity constants <By+G(x,y),y> <= -c|y|^2 + C with c = mu/2
  /// and C fitted as the least constant over the sampled fields.
  double weak_c = 0.0;
  double weak_C = 0.0;
  /// Whether the declared g_y_sup dominates the scan estimate.
  bool declared_consistent = true;
};

/// Scan |dg/dy| by central finite differences over the box; resolution is the
/// point count per axis. The strict verdict uses the declared g_y_sup when the
/// model provides one (a finite scan cannot certify a supremum).
DissipativityReport check_dissipativity(const ModelSpec& m, const ScanBox& box,
                                        int resolution);

/// f = y, g = -kappa*y + x. Unbounded coefficients, admitted for its exact
/// Gaussian invariant measure.
ModelSpec make_linear_model(double kappa = 1.0);
/// f = tanh(y), g = -kappa*y + sin(x). Bounded with bounded derivatives.
ModelSpec make_tanh_model(double kappa = 1.0);
/// f = g = 0 diagnostic model (pure semigroup + stochastic convolution).
ModelSpec make_zero_model();

/// Lookup by name: "linear", "tanh", "zero". Throws std::invalid_argument.
ModelSpec model_by_name(const std::string& name, double kappa = 1.0);

}  // namespace sfavg
