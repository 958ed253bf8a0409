#include "sfavg/simulator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sfavg {

int default_micro_substeps(double h, double mu1, double epsilon) {
  const int mf = int(std::ceil(10.0 * h * mu1 / epsilon));
  return mf < 1 ? 1 : mf;
}

double ou_update(double y_k, double mu_k, double drift_k, double tau, double gaussian) {
  if (!(tau > 0.0)) throw std::domain_error("ou_update: tau must be > 0");
  if (!(mu_k > 0.0)) throw std::domain_error("ou_update: mu_k must be > 0");
  const double decay = std::exp(-mu_k * tau);
  const double phi = -std::expm1(-mu_k * tau) / mu_k;
  const double sigma = std::sqrt(-std::expm1(-2.0 * mu_k * tau) / (2.0 * mu_k));
  return decay * y_k + phi * drift_k + sigma * gaussian;
}

namespace {

std::uint64_t checked_step_count(double T, double h) {
  if (!(T > 0.0)) throw std::invalid_argument("simulate: T must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("simulate: dt_macro must be > 0");
  const double ratio = T / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("simulate: T/dt_macro must be integral within round-off");
  return std::uint64_t(rounded);
}

void check_finite_drift(const SpectralField& d, const char* which) {
  if (!d.all_finite())
    throw EvaluationError(std::string(which) + ": non-finite spectral drift");
}

}  // namespace

SlowFastStepper::SlowFastStepper(const ModelSpec& m, int basis_size, double epsilon,
                                 const StepperConfig& cfg)
    : model_(&m), n_(basis_size), h_(cfg.dt_macro) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("SlowFastStepper: epsilon must be > 0");
  if (!(h_ > 0.0)) throw std::invalid_argument("SlowFastStepper: dt_macro must be > 0");
  mf_ = cfg.micro_substeps > 0
            ? cfg.micro_substeps
            : default_micro_substeps(h_, m.op_b.smallest(), epsilon);
  tau_ = (h_ / double(mf_)) / epsilon;

  slow_decay_.resize(std::size_t(n_));
  slow_phi_.resize(std::size_t(n_));
  fast_decay_.resize(std::size_t(n_));
  fast_phi_.resize(std::size_t(n_));
  fast_sigma_.resize(std::size_t(n_));
  for (int k = 0; k < n_; ++k) {
    const double lam = m.op_a.eigenvalue(k + 1);
    const double mu = m.op_b.eigenvalue(k + 1);
    slow_decay_[std::size_t(k)] = std::exp(-lam * h_);
    slow_phi_[std::size_t(k)] = -std::expm1(-lam * h_) / lam;
    fast_decay_[std::size_t(k)] = std::exp(-mu * tau_);
    fast_phi_[std::size_t(k)] = -std::expm1(-mu * tau_) / mu;
    fast_sigma_[std::size_t(k)] = std::sqrt(-std::expm1(-2.0 * mu * tau_) / (2.0 * mu));
  }
}

SpectralField SlowFastStepper::fast_sweep(const SpectralField& x_frozen, SpectralField& y,
                                          std::uint64_t step_index,
                                          const GaussianStream& gs) const {
  const std::uint64_t base = step_index * std::uint64_t(mf_);
  if (model_->dealias) {
    // Padded evaluation goes through the generic Nemytskii path.
    SpectralField f_acc(n_);
    for (int s = 0; s < mf_; ++s) {
      f_acc = f_acc + nemytskii_f(*model_, x_frozen, y);
      const SpectralField g = nemytskii_g(*model_, x_frozen, y);
      const std::uint64_t event = base + std::uint64_t(s);
      for (int k = 0; k < n_; ++k)
        y[k] = fast_decay_[std::size_t(k)] * y[k] + fast_phi_[std::size_t(k)] * g[k] +
               fast_sigma_[std::size_t(k)] * gs(event, std::uint32_t(k + 1));
    }
    return (1.0 / double(mf_)) * f_acc;
  }

  const GridField gx = to_grid(x_frozen);
  GridField gv(n_);
  GridField f_acc(n_);
  for (int s = 0; s < mf_; ++s) {
    const GridField gy = to_grid(y);
    for (int j = 0; j < n_; ++j) {
      const double xi = double(j + 1) / double(n_ + 1);
      f_acc.values[std::size_t(j)] +=
          model_->f(xi, gx.values[std::size_t(j)], gy.values[std::size_t(j)]);
      gv.values[std::size_t(j)] =
          model_->g(xi, gx.values[std::size_t(j)], gy.values[std::size_t(j)]);
    }
    const SpectralField g = to_spectral(gv);
    check_finite_drift(g, "nemytskii g");
    const std::uint64_t event = base + std::uint64_t(s);
    for (int k = 0; k < n_; ++k)
      y[k] = fast_decay_[std::size_t(k)] * y[k] + fast_phi_[std::size_t(k)] * g[k] +
             fast_sigma_[std::size_t(k)] * gs(event, std::uint32_t(k + 1));
  }
  for (double& v : f_acc.values) v /= double(mf_);
  const SpectralField f_avg = to_spectral(f_acc);
  check_finite_drift(f_avg, "nemytskii f");
  return f_avg;
}

void SlowFastStepper::step(SpectralField& x, SpectralField& y, std::uint64_t step_index,
                           const GaussianStream& gs) const {
  const SpectralField f = fast_sweep(x, y, step_index, gs);
  for (int k = 0; k < n_; ++k)
    x[k] = slow_decay_[std::size_t(k)] * x[k] + slow_phi_[std::size_t(k)] * f[k];
}

void SlowFastStepper::step_pair(SpectralField& x, SpectralField& y, SpectralField& x_aux,
                                SpectralField& y_aux, const SpectralField& x_block,
                                std::uint64_t step_index, const GaussianStream& gs) const {
  if (model_->dealias) {
    SpectralField f_acc(n_), f_aux_acc(n_);
    const std::uint64_t base = step_index * std::uint64_t(mf_);
    for (int s = 0; s < mf_; ++s) {
      f_acc = f_acc + nemytskii_f(*model_, x, y);
      f_aux_acc = f_aux_acc + nemytskii_f(*model_, x_block, y_aux);
      const SpectralField g = nemytskii_g(*model_, x, y);
      const SpectralField g_aux = nemytskii_g(*model_, x_block, y_aux);
      const std::uint64_t event = base + std::uint64_t(s);
      for (int k = 0; k < n_; ++k) {
        const double draw = gs(event, std::uint32_t(k + 1));
        y[k] = fast_decay_[std::size_t(k)] * y[k] + fast_phi_[std::size_t(k)] * g[k] +
               fast_sigma_[std::size_t(k)] * draw;
        y_aux[k] = fast_decay_[std::size_t(k)] * y_aux[k] +
                   fast_phi_[std::size_t(k)] * g_aux[k] + fast_sigma_[std::size_t(k)] * draw;
      }
    }
    for (int k = 0; k < n_; ++k) {
      x[k] = slow_decay_[std::size_t(k)] * x[k] +
             slow_phi_[std::size_t(k)] * f_acc[k] / double(mf_);
      x_aux[k] = slow_decay_[std::size_t(k)] * x_aux[k] +
                 slow_phi_[std::size_t(k)] * f_aux_acc[k] / double(mf_);
    }
    return;
  }
  const GridField gx = to_grid(x);
  const GridField gb = to_grid(x_block);
  GridField gv(n_), gv_aux(n_);
  GridField f_acc(n_), f_aux_acc(n_);
  const std::uint64_t base = step_index * std::uint64_t(mf_);
  for (int s = 0; s < mf_; ++s) {
    const GridField gy = to_grid(y);
    const GridField gy_aux = to_grid(y_aux);
    for (int j = 0; j < n_; ++j) {
      const double xi = double(j + 1) / double(n_ + 1);
      f_acc.values[std::size_t(j)] +=
          model_->f(xi, gx.values[std::size_t(j)], gy.values[std::size_t(j)]);
      f_aux_acc.values[std::size_t(j)] +=
          model_->f(xi, gb.values[std::size_t(j)], gy_aux.values[std::size_t(j)]);
      gv.values[std::size_t(j)] =
          model_->g(xi, gx.values[std::size_t(j)], gy.values[std::size_t(j)]);
      gv_aux.values[std::size_t(j)] =
          model_->g(xi, gb.values[std::size_t(j)], gy_aux.values[std::size_t(j)]);
    }
    const SpectralField g = to_spectral(gv);
    const SpectralField g_aux = to_spectral(gv_aux);
    check_finite_drift(g, "nemytskii g");
    check_finite_drift(g_aux, "nemytskii g (auxiliary)");
    const std::uint64_t event = base + std::uint64_t(s);
    for (int k = 0; k < n_; ++k) {
      const double draw = gs(event, std::uint32_t(k + 1));
      y[k] = fast_decay_[std::size_t(k)] * y[k] + fast_phi_[std::size_t(k)] * g[k] +
             fast_sigma_[std::size_t(k)] * draw;
      y_aux[k] = fast_decay_[std::size_t(k)] * y_aux[k] +
                 fast_phi_[std::size_t(k)] * g_aux[k] + fast_sigma_[std::size_t(k)] * draw;
    }
  }
  for (double& v : f_acc.values) v /= double(mf_);
  for (double& v : f_aux_acc.values) v /= double(mf_);
  const SpectralField f = to_spectral(f_acc);
  const SpectralField f_aux = to_spectral(f_aux_acc);
  check_finite_drift(f, "nemytskii f");
  check_finite_drift(f_aux, "nemytskii f (auxiliary)");
  for (int k = 0; k < n_; ++k) {
    x[k] = slow_decay_[std::size_t(k)] * x[k] + slow_phi_[std::size_t(k)] * f[k];
    x_aux[k] = slow_decay_[std::size_t(k)] * x_aux[k] + slow_phi_[std::size_t(k)] * f_aux[k];
  }
}

SlowFastState step_slowfast(const SlowFastState& s, const ModelSpec& m,
                            const StepperConfig& cfg, const NoisePlan& noise) {
  if (s.x.basis_size() != s.y.basis_size())
    throw std::invalid_argument("step_slowfast: x and y basis sizes differ");
  const SlowFastStepper stepper(m, s.x.basis_size(), s.epsilon, cfg);
  const GaussianStream gs(noise);
  const auto step_index = std::uint64_t(std::llround(s.t / cfg.dt_macro));
  SlowFastState next = s;
  stepper.step(next.x, next.y, step_index, gs);
  next.t = s.t + cfg.dt_macro;
  return next;
}

Trajectory simulate(const SpectralField& x0, const SpectralField& y0, double epsilon,
                    double T, const ModelSpec& m, const StepperConfig& cfg,
                    const NoisePlan& noise) {
  if (x0.basis_size() != y0.basis_size())
    throw std::invalid_argument("simulate: x0 and y0 basis sizes differ");
  const std::uint64_t steps = checked_step_count(T, cfg.dt_macro);
  const SlowFastStepper stepper(m, x0.basis_size(), epsilon, cfg);
  const GaussianStream gs(noise);

  Trajectory traj;
  traj.states.reserve(steps + 1);
  SlowFastState st{x0, y0, 0.0, epsilon};
  traj.states.push_back(st);
  for (std::uint64_t i = 0; i < steps; ++i) {
    stepper.step(st.x, st.y, i, gs);
    st.t = double(i + 1) * cfg.dt_macro;
    traj.states.push_back(st);
  }
  return traj;
}

void drive_frozen_fast(
    const SpectralField& x, const SpectralField& y0, double t_end, const ModelSpec& m,
    double dt, const NoisePlan& noise,
    const std::function<void(double, const SpectralField&, const GridField&)>& observer) {
  if (x.basis_size() != y0.basis_size())
    throw std::invalid_argument("drive_frozen_fast: x and y0 basis sizes differ");
  if (!(dt > 0.0)) throw std::invalid_argument("drive_frozen_fast: dt must be > 0");
  const int n = x.basis_size();
  const std::uint64_t steps = std::uint64_t(std::ceil(t_end / dt - 1e-12));
  const GaussianStream gs(noise);

  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> decay(nn), phi(nn), sigma(nn);
  for (int k = 0; k < n; ++k) {
    const double mu = m.op_b.eigenvalue(k + 1);
    decay[std::size_t(k)] = std::exp(-mu * dt);
    phi[std::size_t(k)] = -std::expm1(-mu * dt) / mu;
    sigma[std::size_t(k)] = std::sqrt(-std::expm1(-2.0 * mu * dt) / (2.0 * mu));
  }

  const GridField gx = to_grid(x);
  SpectralField y = y0;
  GridField gy = to_grid(y);
  GridField gv(n);
  for (std::uint64_t i = 0; i < steps; ++i) {
    if (m.dealias) {
      const SpectralField g = nemytskii_g(m, x, y);
      for (int k = 0; k < n; ++k)
        y[k] = decay[std::size_t(k)] * y[k] + phi[std::size_t(k)] * g[k] +
               sigma[std::size_t(k)] * gs(i, std::uint32_t(k + 1));
    } else {
      for (int j = 0; j < n; ++j) {
        const double xi = double(j + 1) / double(n + 1);
        gv.values[std::size_t(j)] =
            m.g(xi, gx.values[std::size_t(j)], gy.values[std::size_t(j)]);
      }
      const SpectralField g = to_spectral(gv);
      check_finite_drift(g, "nemytskii g");
      for (int k = 0; k < n; ++k)
        y[k] = decay[std::size_t(k)] * y[k] + phi[std::size_t(k)] * g[k] +
               sigma[std::size_t(k)] * gs(i, std::uint32_t(k + 1));
    }
    gy = to_grid(y);
    observer(double(i + 1) * dt, y, gy);
  }
}

std::vector<std::pair<double, SpectralField>> simulate_frozen_fast(
    const SpectralField& x, const SpectralField& y0, double t_fast, const ModelSpec& m,
    const StepperConfig& cfg, const NoisePlan& noise) {
  const std::uint64_t steps = checked_step_count(t_fast, cfg.dt_macro);
  const int mf = cfg.micro_substeps > 0
                     ? cfg.micro_substeps
                     : default_micro_substeps(cfg.dt_macro, m.op_b.smallest(), 1.0);
  const double dt = cfg.dt_macro / double(mf);

  std::vector<std::pair<double, SpectralField>> out;
  out.reserve(steps + 1);
  out.emplace_back(0.0, y0);
  std::uint64_t count = 0;
  drive_frozen_fast(x, y0, t_fast, m, dt, noise,
                    [&](double t, const SpectralField& y, const GridField&) {
                      ++count;
                      if (count % std::uint64_t(mf) == 0) out.emplace_back(t, y);
                    });
  return out;
}

HasminskiiPair simulate_hasminskii_pair(const SpectralField& x0, const SpectralField& y0,
                                        double epsilon, double T, int delta_steps,
                                        const ModelSpec& m, const StepperConfig& cfg,
                                        const NoisePlan& noise) {
  if (delta_steps < 1)
    throw std::invalid_argument("simulate_hasminskii_pair: delta_steps >= 1 required");
  const std::uint64_t steps = checked_step_count(T, cfg.dt_macro);
  const SlowFastStepper stepper(m, x0.basis_size(), epsilon, cfg);
  const GaussianStream gs(noise);

  SpectralField x = x0, y = y0, x_aux = x0, y_aux = y0;
  SpectralField x_block = x0;
  for (std::uint64_t i = 0; i < steps; ++i) {
    if (i % std::uint64_t(delta_steps) == 0) x_block = x;
    stepper.step_pair(x, y, x_aux, y_aux, x_block, i, gs);
  }
  return HasminskiiPair{std::move(x), std::move(x_aux), double(steps) * cfg.dt_macro};
}

}  // namespace sfavg
