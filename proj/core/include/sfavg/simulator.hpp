#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "sfavg/model.hpp"
#include "sfavg/noise.hpp"
#include "sfavg/spectral.hpp"

namespace sfavg {

/// The coupled pair (X, Y) at a given time. epsilon is fixed over a trajectory.
struct SlowFastState {
  SpectralField x;
  SpectralField y;
  double t = 0.0;
  double epsilon = 1.0;
};

/// Macro step h and fast substeps per macro step; micro_substeps = 0 selects
/// the default policy ceil(10 h mu_1 / epsilon), i.e. at least ten substeps
/// per fast relaxation time.
struct StepperConfig {
  double dt_macro = 1.0 / 256.0;
  int micro_substeps = 0;
};

int default_micro_substeps(double h, double mu1, double epsilon);

/// Exact one-step solution of dy = (-mu y + drift) ds + dbeta over effective
/// time tau with the drift frozen:
///   e^{-mu tau} y + (1-e^{-mu tau})/mu * drift
///   + sqrt((1-e^{-2 mu tau})/(2 mu)) * gaussian.
double ou_update(double y_k, double mu_k, double drift_k, double tau, double gaussian);

struct Trajectory {
  std::vector<SlowFastState> states;
  const SlowFastState& final_state() const { return states.back(); }
};

/// Precomputed per-mode exponential-Euler stepper for one (model, N, epsilon,
/// config). The fast component takes micro_substeps exact OU substeps with the
/// slow state frozen across the macro step; the slow update applies the
/// exponential-Euler weight to the average of F(x, y) over those substep
/// states (the micro-to-macro estimator; a start-point sample would add an
/// epsilon-independent O(sqrt(h)) sampling error to the slow component).
/// Noise is consumed in mode-major order at global substep events
/// step_index*M_f + substep.
class SlowFastStepper {
 public:
  SlowFastStepper(const ModelSpec& m, int basis_size, double epsilon,
                  const StepperConfig& cfg);

  int micro_substeps() const { return mf_; }
  double dt_macro() const { return h_; }

  void step(SpectralField& x, SpectralField& y, std::uint64_t step_index,
            const GaussianStream& gs) const;

  /// One macro step of the Hasminskii pair: the true system plus the auxiliary
  /// system whose F and G read the frozen slow state x_block, both driven by
  /// the same draws.
  void step_pair(SpectralField& x, SpectralField& y, SpectralField& x_aux,
                 SpectralField& y_aux, const SpectralField& x_block,
                 std::uint64_t step_index, const GaussianStream& gs) const;

 private:
  SpectralField fast_sweep(const SpectralField& x_frozen, SpectralField& y,
                           std::uint64_t step_index, const GaussianStream& gs) const;

  const ModelSpec* model_;
  int n_;
  double h_ = 0.0;
  int mf_ = 1;
  double tau_ = 0.0;  // (h/M_f)/epsilon, the effective OU time per substep
  std::vector<double> slow_decay_, slow_phi_;
  std::vector<double> fast_decay_, fast_phi_, fast_sigma_;
};

/// One macro step from the given state; the step index (and with it the noise
/// events consumed) is derived from s.t, so trajectories started at t = 0 and
/// advanced step by step reproduce simulate() exactly.
SlowFastState step_slowfast(const SlowFastState& s, const ModelSpec& m,
                            const StepperConfig& cfg, const NoisePlan& noise);

/// Integrate the coupled system to time T (T/h must be integral within
/// round-off). Returns the states at every macro step including t = 0.
Trajectory simulate(const SpectralField& x0, const SpectralField& y0, double epsilon,
                    double T, const ModelSpec& m, const StepperConfig& cfg,
                    const NoisePlan& noise);

/// Fast equation with the slow argument frozen at x, in intrinsic time
/// (epsilon = 1): dY = (BY + G(x,Y)) dt + dW. States recorded at macro steps.
std::vector<std::pair<double, SpectralField>> simulate_frozen_fast(
    const SpectralField& x, const SpectralField& y0, double t_fast, const ModelSpec& m,
    const StepperConfig& cfg, const NoisePlan& noise);

/// Step-level driver behind simulate_frozen_fast: integrates with substep dt
/// and hands every post-step state (plus its grid values) to the observer.
void drive_frozen_fast(
    const SpectralField& x, const SpectralField& y0, double t_end, const ModelSpec& m,
    double dt, const NoisePlan& noise,
    const std::function<void(double t, const SpectralField& y, const GridField& y_grid)>&
        observer);

struct HasminskiiPair {
  SpectralField x_final;
  SpectralField x_aux_final;
  double t_final = 0.0;
};

/// Simulate (X,Y) and the auxiliary (X~,Y~) of the Hasminskii construction
/// under one noise stream; the auxiliary coefficients read X at the start of
/// each block of delta_steps macro steps.
HasminskiiPair simulate_hasminskii_pair(const SpectralField& x0, const SpectralField& y0,
                                        double epsilon, double T, int delta_steps,
                                        const ModelSpec& m, const StepperConfig& cfg,
                                        const NoisePlan& noise);

}  // namespace sfavg
