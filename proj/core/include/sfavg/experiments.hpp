#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sfavg/averaging.hpp"
#include "sfavg/config.hpp"
#include "sfavg/model.hpp"
#include "sfavg/spectral.hpp"

namespace sfavg {

/// A Monte Carlo ladder lost more than 1% of its samples to non-finite values.
class BlowupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// fit_order was given fewer than three usable rows.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ErrorRow {
  double epsilon = 0.0;
  double error = 0.0;
  double standard_error = 0.0;
  long samples = 0;
  bool excluded = false;  // noise-dominated (weak ladder) or otherwise unusable
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
  std::string error_kind;  // "strong" | "weak" | "hasminskii_gap"
  std::string model;
  double T = 0.0;
  int basis_size = 0;
  std::uint64_t seed = 0;
};

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_halfwidth = 0.0;  // 95% confidence halfwidth from the WLS fit
  int used_rows = 0;
};

/// Slope acceptance bands (the theorems' slack r plus finite-epsilon and
/// statistical effects at desk scale).
inline constexpr double kStrongSlopeLo = 0.35;
inline constexpr double kStrongSlopeHi = 0.65;
inline constexpr double kWeakSlopeLo = 0.7;
inline constexpr double kWeakSlopeHi = 1.3;

using RowLogger = std::function<void(const ErrorRow&)>;

/// x0 coefficients k^{-p} (y0 analogously); p is the regularity knob.
SpectralField initial_field(int basis_size, double decay_exponent);

/// Built-in bounded twice-differentiable test functionals:
/// "tanh_mode1" -> tanh(<x,e_1>), "exp_neg_sq" -> exp(-|x|^2), "constant" -> 1.
std::function<double(const SpectralField&)> phi_by_name(const std::string& name);

/// Mean of |X^eps(T) - Xbar(T)|_H per epsilon; Xbar solved once from the
/// Fbar oracle (or a frozen high-accuracy estimate) with the same macro step.
ErrorTable strong_error_ladder(const ExperimentConfig& cfg, const RowLogger& log = {});

/// |mean_M phi(X^eps(T)) - phi(Xbar(T))| per epsilon; rows below twice their
/// Monte Carlo standard error are flagged noise-dominated and excluded.
ErrorTable weak_error_ladder(const ExperimentConfig& cfg, const RowLogger& log = {});

/// Mean of |X^eps(T) - Xtilde^eps(T)|_H for the auxiliary process with the
/// slow input frozen on blocks of length delta = sqrt(eps) (rounded to macro
/// steps), both processes driven by the same noise.
ErrorTable hasminskii_gap_ladder(const ExperimentConfig& cfg, const RowLogger& log = {});

/// Weighted least squares of log(error) on log(epsilon), weights 1/SE^2
/// (uniform when standard errors are zero). Requires >= 3 usable rows.
OrderFit fit_order(const ErrorTable& table);

/// One strong-error cell (used by the weak-order fallback criterion).
ErrorRow strong_error_cell(const ExperimentConfig& cfg, double epsilon);

/// The reference Fbar used by the ladders: analytic oracle when the model
/// declares one, else a frozen high-accuracy ergodic estimate.
FbarFn make_fbar_reference(const ModelSpec& m, const ExperimentConfig& cfg);

}  // namespace sfavg
