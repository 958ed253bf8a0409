#include "sfavg/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sfavg/parallel.hpp"
#include "sfavg/quadrature.hpp"
#include "sfavg/simulator.hpp"

namespace sfavg {

double FbarEstimate::aggregate_standard_error() const {
  double s = 0.0;
  for (double se : standard_error) s += se * se;
  return std::sqrt(s);
}

FbarEstimate estimate_fbar(const SpectralField& x, const ModelSpec& m, double burn_in,
                           double horizon, int ensemble, double dt_fast,
                           const NoisePlan& noise, int threads) {
  if (!(burn_in > 0.0) || !(horizon > burn_in))
    throw std::domain_error("estimate_fbar: horizon > burn_in > 0 required");
  if (ensemble < 1) throw std::domain_error("estimate_fbar: ensemble >= 1 required");
  if (!(dt_fast > 0.0)) throw std::domain_error("estimate_fbar: dt_fast > 0 required");

  const int n = x.basis_size();
  const GridField gx = to_grid(x);
  const SpectralField y0(n);

  // Per-member time averages of F(x, Y(s)) accumulated in grid space; the
  // transform commutes with the average.
  std::vector<SpectralField> member_avg(static_cast<std::size_t>(ensemble));
  parallel_for(std::size_t(ensemble), threads, [&](std::size_t i) {
    GridField acc(n);
    std::uint64_t count = 0;
    drive_frozen_fast(x, y0, horizon, m, dt_fast, noise.with_sample(noise.sample_index + i),
                      [&](double t, const SpectralField&, const GridField& gy) {
                        if (t <= burn_in) return;
                        for (int j = 0; j < n; ++j) {
                          const double xi = double(j + 1) / double(n + 1);
                          acc.values[std::size_t(j)] +=
                              m.f(xi, gx.values[std::size_t(j)], gy.values[std::size_t(j)]);
                        }
                        ++count;
                      });
    if (count == 0) throw std::domain_error("estimate_fbar: no substeps past burn_in");
    for (double& v : acc.values) v /= double(count);
    member_avg[i] = to_spectral(acc);
  });

  FbarEstimate est;
  est.burn_in = burn_in;
  est.horizon = horizon;
  est.ensemble = ensemble;
  est.value = SpectralField(n);
  est.standard_error.assign(std::size_t(n), 0.0);
  for (const auto& a : member_avg)
    for (int k = 0; k < n; ++k) est.value[k] += a[k];
  for (int k = 0; k < n; ++k) est.value[k] /= double(ensemble);
  if (ensemble > 1) {
    for (int k = 0; k < n; ++k) {
      double var = 0.0;
      for (const auto& a : member_avg) {
        const double d = a[k] - est.value[k];
        var += d * d;
      }
      var /= double(ensemble - 1);
      est.standard_error[std::size_t(k)] = std::sqrt(var / double(ensemble));
    }
  }
  return est;
}

SpectralField gibbs_fbar_oracle(const SpectralField& x, const ModelSpec& m, int gh_nodes) {
  if (!m.linear_in_y)
    throw std::domain_error(
        "gibbs_fbar_oracle: model must declare g(xi,x,y) = -kappa*y + h(xi,x)");
  if (gh_nodes < 1) throw std::domain_error("gibbs_fbar_oracle: gh_nodes >= 1");
  const int n = x.basis_size();
  const GridField gx = to_grid(x);

  GridField hg(n);
  for (int j = 0; j < n; ++j) {
    const double xi = double(j + 1) / double(n + 1);
    hg.values[std::size_t(j)] = m.forcing(xi, gx.values[std::size_t(j)]);
  }
  const SpectralField h = to_spectral(hg);

  SpectralField mean_modes(n);
  std::vector<double> var_modes(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double rate = m.op_b.eigenvalue(k + 1) + m.kappa;
    mean_modes[k] = h[k] / rate;
    var_modes[std::size_t(k)] = 1.0 / (2.0 * rate);
  }
  const GridField mean_grid = to_grid(mean_modes);

  const auto& tbl = sine_table(n);
  const QuadratureRule rule = gauss_hermite(gh_nodes);
  const double inv_rt_pi = 1.0 / std::sqrt(std::numbers::pi);

  GridField out(n);
  for (int j = 0; j < n; ++j) {
    const double xi = double(j + 1) / double(n + 1);
    double var = 0.0;
    for (int k = 0; k < n; ++k) {
      const double ek = std::numbers::sqrt2 * tbl[std::size_t(j) * std::size_t(n) + std::size_t(k)];
      var += var_modes[std::size_t(k)] * ek * ek;
    }
    const double s = std::sqrt(2.0 * var);
    const double mj = mean_grid.values[std::size_t(j)];
    const double xj = gx.values[std::size_t(j)];
    double acc = 0.0;
    for (int q = 0; q < gh_nodes; ++q)
      acc += rule.weights[std::size_t(q)] * m.f(xi, xj, mj + s * rule.nodes[std::size_t(q)]);
    out.values[std::size_t(j)] = inv_rt_pi * acc;
  }
  return to_spectral(out);
}

std::vector<std::pair<double, SpectralField>> solve_averaged(const SpectralField& x0,
                                                             const FbarFn& fbar,
                                                             const OperatorSpec& op_a,
                                                             double T, double h) {
  if (!(T > 0.0) || !(h > 0.0))
    throw std::invalid_argument("solve_averaged: T and h must be > 0");
  const double ratio = T / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("solve_averaged: T/h must be integral within round-off");
  const auto steps = std::uint64_t(rounded);
  const int n = x0.basis_size();

  std::vector<double> decay(static_cast<std::size_t>(n)), phi(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double lam = op_a.eigenvalue(k + 1);
    decay[std::size_t(k)] = std::exp(-lam * h);
    phi[std::size_t(k)] = -std::expm1(-lam * h) / lam;
  }

  std::vector<std::pair<double, SpectralField>> traj;
  traj.reserve(steps + 1);
  SpectralField x = x0;
  traj.emplace_back(0.0, x);
  for (std::uint64_t i = 0; i < steps; ++i) {
    const SpectralField fb = fbar(x);
    if (!fb.all_finite()) throw EvaluationError("solve_averaged: non-finite Fbar");
    for (int k = 0; k < n; ++k)
      x[k] = decay[std::size_t(k)] * x[k] + phi[std::size_t(k)] * fb[k];
    traj.emplace_back(double(i + 1) * h, x);
  }
  return traj;
}

namespace {

SpectralField fbar_reference(const SpectralField& x, const ModelSpec& m,
                             const NoisePlan& noise, int threads, int gh_nodes) {
  if (m.linear_in_y) return gibbs_fbar_oracle(x, m, gh_nodes);
  const double burn = default_burn_in(m);
  return estimate_fbar(x, m, burn, burn + 100.0 / (m.op_b.smallest() + m.contraction_bonus),
                       32, default_dt_fast(m), noise, threads)
      .value;
}

}  // namespace

MixingReport mixing_diagnostic(const SpectralField& x, const SpectralField& y,
                               const ModelSpec& m, const std::vector<double>& time_grid,
                               int ensemble, double dt_fast, const NoisePlan& noise,
                               int threads, int gh_nodes) {
  if (time_grid.empty()) throw std::domain_error("mixing_diagnostic: empty time grid");
  for (std::size_t i = 0; i < time_grid.size(); ++i) {
    if (time_grid[i] < 0.0 || (i > 0 && time_grid[i] <= time_grid[i - 1]))
      throw std::domain_error("mixing_diagnostic: time grid must be increasing and >= 0");
  }
  if (ensemble < 2) throw std::domain_error("mixing_diagnostic: ensemble >= 2 required");
  if (!(dt_fast > 0.0)) throw std::domain_error("mixing_diagnostic: dt_fast > 0 required");

  const int n = x.basis_size();
  const NoisePlan ref_plan{derive_seed(noise.seed, 0xFBA5ull), 0};
  const SpectralField fbar = fbar_reference(x, m, ref_plan, threads, gh_nodes);
  const GridField gx = to_grid(x);

  // Snap grid times to substep multiples; index 0 means the exact t = 0 value.
  std::vector<std::uint64_t> snap(time_grid.size());
  for (std::size_t i = 0; i < time_grid.size(); ++i)
    snap[i] = std::uint64_t(std::llround(time_grid[i] / dt_fast));
  const std::uint64_t last = snap.back();

  MixingReport rep;
  rep.times.resize(time_grid.size());
  for (std::size_t i = 0; i < time_grid.size(); ++i) rep.times[i] = double(snap[i]) * dt_fast;
  rep.estimates.assign(time_grid.size(), 0.0);
  rep.standard_errors.assign(time_grid.size(), 0.0);
  rep.usable.assign(time_grid.size(), false);

  // Per time point, per mode: mean and variance of F(x, Y(t)) across members.
  const std::size_t pts = time_grid.size();
  std::vector<std::vector<SpectralField>> samples(pts,
                                                  std::vector<SpectralField>(std::size_t(ensemble)));
  parallel_for(std::size_t(ensemble), threads, [&](std::size_t i) {
    std::size_t cursor = 0;
    auto record = [&](std::size_t pt, const GridField& gy) {
      GridField fv(n);
      for (int j = 0; j < n; ++j) {
        const double xi = double(j + 1) / double(n + 1);
        fv.values[std::size_t(j)] =
            m.f(xi, gx.values[std::size_t(j)], gy.values[std::size_t(j)]);
      }
      samples[pt][i] = to_spectral(fv);
    };
    while (cursor < pts && snap[cursor] == 0) {
      record(cursor, to_grid(y));
      ++cursor;
    }
    if (cursor >= pts) return;
    std::uint64_t step = 0;
    drive_frozen_fast(x, y, double(last) * dt_fast, m, dt_fast,
                      noise.with_sample(noise.sample_index + i),
                      [&](double, const SpectralField&, const GridField& gy) {
                        ++step;
                        while (cursor < pts && snap[cursor] == step) {
                          record(cursor, gy);
                          ++cursor;
                        }
                      });
  });

  for (std::size_t p = 0; p < pts; ++p) {
    SpectralField mean(n);
    for (const auto& s : samples[p])
      for (int k = 0; k < n; ++k) mean[k] += s[k];
    for (int k = 0; k < n; ++k) mean[k] /= double(ensemble);
    double se2 = 0.0;
    for (int k = 0; k < n; ++k) {
      double var = 0.0;
      for (const auto& s : samples[p]) {
        const double d = s[k] - mean[k];
        var += d * d;
      }
      var /= double(ensemble - 1);
      se2 += var / double(ensemble);
    }
    const double gap2 = (mean - fbar).norm() * (mean - fbar).norm();
    // E|mean - Fbar|^2 = |Ftilde|^2 + sum_k Var_k; subtract the noise floor.
    const double debiased = std::max(0.0, gap2 - se2);
    if (snap[p] == 0) {
      // No expectation at t = 0: Ftilde(x,y,0) = F(x,y) - Fbar(x) exactly.
      rep.estimates[p] = (samples[p][0] - fbar).norm();
      rep.standard_errors[p] = 0.0;
      rep.usable[p] = rep.estimates[p] > 0.0;
    } else {
      rep.estimates[p] = std::sqrt(debiased);
      rep.standard_errors[p] = std::sqrt(se2);
      rep.usable[p] = rep.estimates[p] > 2.0 * rep.standard_errors[p];
    }
  }

  // Log-linear fit of the usable segment.
  std::vector<double> ft, fy;
  for (std::size_t p = 0; p < pts; ++p) {
    if (!rep.usable[p] || rep.estimates[p] <= 0.0) continue;
    ft.push_back(rep.times[p]);
    fy.push_back(std::log(rep.estimates[p]));
  }
  if (ft.size() < 3) {
    rep.verdict = "inconclusive";
    return rep;
  }
  const std::size_t nf = ft.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < nf; ++i) {
    sx += ft[i];
    sy += fy[i];
  }
  const double mx = sx / double(nf), my = sy / double(nf);
  double sxx = 0, sxy = 0, sst = 0;
  for (std::size_t i = 0; i < nf; ++i) {
    sxx += (ft[i] - mx) * (ft[i] - mx);
    sxy += (ft[i] - mx) * (fy[i] - my);
    sst += (fy[i] - my) * (fy[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < nf; ++i) {
    const double r = fy[i] - (intercept + slope * ft[i]);
    ssr += r * r;
  }
  rep.decay_rate = -slope;
  rep.amplitude = std::exp(intercept);
  rep.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  rep.verdict = (rep.decay_rate > 0.0 && rep.r_squared >= 0.9) ? "confirmed" : "not_confirmed";
  return rep;
}

double default_burn_in(const ModelSpec& m) {
  return 5.0 / (m.op_b.smallest() + m.contraction_bonus);
}

double default_fbar_horizon(const ModelSpec& m) {
  return default_burn_in(m) + 50.0 / (m.op_b.smallest() + m.contraction_bonus);
}

double default_dt_fast(const ModelSpec& m) { return 0.02 / m.op_b.smallest(); }

}  // namespace sfavg
