#include "sfavg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "sfavg/parallel.hpp"
#include "sfavg/simulator.hpp"

namespace sfavg {

SpectralField initial_field(int basis_size, double decay_exponent) {
  SpectralField x(basis_size);
  for (int k = 0; k < basis_size; ++k)
    x[k] = std::pow(double(k + 1), -decay_exponent);
  return x;
}

std::function<double(const SpectralField&)> phi_by_name(const std::string& name) {
  if (name == "tanh_mode1")
    return [](const SpectralField& x) { return std::tanh(x[0]); };
  if (name == "exp_neg_sq")
    return [](const SpectralField& x) {
      const double n = x.norm();
      return std::exp(-n * n);
    };
  if (name == "constant") return [](const SpectralField&) { return 1.0; };
  throw std::invalid_argument("unknown phi '" + name +
                              "' (built-ins: tanh_mode1, exp_neg_sq, constant)");
}

namespace {

struct LadderSetup {
  ModelSpec model;
  SpectralField x0, y0;
  StepperConfig stepper;
  SpectralField xbar_final;  // Xbar(T), solved once per experiment
};

double resolved_dt_fast(const ExperimentConfig& cfg, const ModelSpec& m) {
  return cfg.dt_fast > 0.0 ? cfg.dt_fast : default_dt_fast(m);
}

double resolved_burn_in(const ExperimentConfig& cfg, const ModelSpec& m) {
  return cfg.burn_in > 0.0 ? cfg.burn_in : default_burn_in(m);
}

LadderSetup make_setup(const ExperimentConfig& cfg) {
  LadderSetup s{model_by_name(cfg.model, cfg.kappa),
                initial_field(cfg.basis_size, cfg.init_regularity),
                initial_field(cfg.basis_size, cfg.init_regularity),
                StepperConfig{cfg.dt_macro, cfg.micro_substeps},
                SpectralField()};
  s.model.dealias = cfg.dealias;
  const FbarFn fbar = make_fbar_reference(s.model, cfg);
  s.xbar_final = solve_averaged(s.x0, fbar, s.model.op_a, cfg.T, cfg.dt_macro).back().second;
  return s;
}

struct CellStats {
  double mean = 0.0;
  double se = 0.0;
  long used = 0;
  long dropped = 0;
};

/// Mean/SE of per-sample values, dropping non-finite entries. Throws
/// BlowupError if more than 1% of the samples were dropped.
CellStats reduce_samples(const std::vector<double>& vals, double epsilon) {
  CellStats st;
  double sum = 0.0;
  for (double v : vals) {
    if (std::isfinite(v)) {
      sum += v;
      ++st.used;
    } else {
      ++st.dropped;
    }
  }
  if (st.used == 0 || double(st.dropped) > 0.01 * double(vals.size())) {
    std::ostringstream msg;
    msg << "ladder cell at epsilon=" << epsilon << ": " << st.dropped << "/" << vals.size()
        << " samples were non-finite";
    throw BlowupError(msg.str());
  }
  st.mean = sum / double(st.used);
  if (st.used > 1) {
    double var = 0.0;
    for (double v : vals) {
      if (!std::isfinite(v)) continue;
      var += (v - st.mean) * (v - st.mean);
    }
    var /= double(st.used - 1);
    st.se = std::sqrt(var / double(st.used));
  }
  return st;
}

int hasminskii_delta_steps(double epsilon, double h) {
  const double delta = std::sqrt(epsilon);
  if (h > delta / 8.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "hasminskii: dt_macro=" << h << " exceeds delta/8=" << delta / 8.0
        << " at epsilon=" << epsilon << "; choose a smaller macro step";
    throw std::invalid_argument(msg.str());
  }
  return std::max(1, int(std::llround(delta / h)));
}

}  // namespace

FbarFn make_fbar_reference(const ModelSpec& m, const ExperimentConfig& cfg) {
  if (m.linear_in_y) {
    const int nodes = cfg.gh_nodes;
    ModelSpec model = m;
    return [model, nodes](const SpectralField& x) {
      return gibbs_fbar_oracle(x, model, nodes);
    };
  }
  // Frozen high-accuracy ergodic estimate, memoized per slow state.
  ModelSpec model = m;
  const double burn = resolved_burn_in(cfg, m);
  const double horizon = burn + 100.0 / (m.op_b.smallest() + m.contraction_bonus);
  const double dt = resolved_dt_fast(cfg, m);
  const int ensemble = std::max(cfg.fbar_ensemble, 32);
  const NoisePlan plan{derive_seed(cfg.seed, 0xFBA2ull), 0};
  const int threads = cfg.threads;
  auto cache = std::make_shared<std::map<std::vector<double>, SpectralField>>();
  auto mu = std::make_shared<std::mutex>();
  return [=](const SpectralField& x) {
    {
      std::scoped_lock lock(*mu);
      auto it = cache->find(x.coeffs);
      if (it != cache->end()) return it->second;
    }
    const SpectralField v =
        estimate_fbar(x, model, burn, horizon, ensemble, dt, plan, threads).value;
    std::scoped_lock lock(*mu);
    (*cache)[x.coeffs] = v;
    return v;
  };
}

ErrorTable strong_error_ladder(const ExperimentConfig& cfg, const RowLogger& log) {
  const LadderSetup setup = make_setup(cfg);
  ErrorTable table;
  table.error_kind = "strong";
  table.model = cfg.model;
  table.T = cfg.T;
  table.basis_size = cfg.basis_size;
  table.seed = cfg.seed;

  for (double eps : cfg.epsilon_ladder) {
    std::vector<double> vals(std::size_t(cfg.samples));
    parallel_for(std::size_t(cfg.samples), cfg.threads, [&](std::size_t i) {
      try {
        const Trajectory traj =
            simulate(setup.x0, setup.y0, eps, cfg.T, setup.model, setup.stepper,
                     NoisePlan{cfg.seed, std::uint64_t(i)});
        vals[i] = (traj.final_state().x - setup.xbar_final).norm();
      } catch (const EvaluationError&) {
        vals[i] = std::numeric_limits<double>::quiet_NaN();
      }
    });
    const CellStats st = reduce_samples(vals, eps);
    ErrorRow row{eps, st.mean, st.se, st.used, false};
    table.rows.push_back(row);
    if (log) log(row);
  }
  return table;
}

ErrorTable weak_error_ladder(const ExperimentConfig& cfg, const RowLogger& log) {
  const LadderSetup setup = make_setup(cfg);
  const auto phi = phi_by_name(cfg.phi);
  const double reference = phi(setup.xbar_final);

  ErrorTable table;
  table.error_kind = "weak";
  table.model = cfg.model;
  table.T = cfg.T;
  table.basis_size = cfg.basis_size;
  table.seed = cfg.seed;

  for (double eps : cfg.epsilon_ladder) {
    std::vector<double> vals(std::size_t(cfg.samples));
    parallel_for(std::size_t(cfg.samples), cfg.threads, [&](std::size_t i) {
      try {
        const Trajectory traj =
            simulate(setup.x0, setup.y0, eps, cfg.T, setup.model, setup.stepper,
                     NoisePlan{cfg.seed, std::uint64_t(i)});
        vals[i] = phi(traj.final_state().x);
      } catch (const EvaluationError&) {
        vals[i] = std::numeric_limits<double>::quiet_NaN();
      }
    });
    const CellStats st = reduce_samples(vals, eps);
    const double error = std::abs(st.mean - reference);
    ErrorRow row{eps, error, st.se, st.used, error < 2.0 * st.se};
    table.rows.push_back(row);
    if (log) log(row);
  }
  return table;
}

ErrorTable hasminskii_gap_ladder(const ExperimentConfig& cfg, const RowLogger& log) {
  ModelSpec model = model_by_name(cfg.model, cfg.kappa);
  model.dealias = cfg.dealias;
  const SpectralField x0 = initial_field(cfg.basis_size, cfg.init_regularity);
  const SpectralField y0 = initial_field(cfg.basis_size, cfg.init_regularity);
  const StepperConfig stepper{cfg.dt_macro, cfg.micro_substeps};

  ErrorTable table;
  table.error_kind = "hasminskii_gap";
  table.model = cfg.model;
  table.T = cfg.T;
  table.basis_size = cfg.basis_size;
  table.seed = cfg.seed;

  for (double eps : cfg.epsilon_ladder) {
    const int delta_steps = hasminskii_delta_steps(eps, cfg.dt_macro);
    std::vector<double> vals(std::size_t(cfg.samples));
    parallel_for(std::size_t(cfg.samples), cfg.threads, [&](std::size_t i) {
      try {
        const HasminskiiPair pair = simulate_hasminskii_pair(
            x0, y0, eps, cfg.T, delta_steps, model, stepper,
            NoisePlan{cfg.seed, std::uint64_t(i)});
        vals[i] = (pair.x_final - pair.x_aux_final).norm();
      } catch (const EvaluationError&) {
        vals[i] = std::numeric_limits<double>::quiet_NaN();
      }
    });
    const CellStats st = reduce_samples(vals, eps);
    ErrorRow row{eps, st.mean, st.se, st.used, false};
    table.rows.push_back(row);
    if (log) log(row);
  }
  return table;
}

ErrorRow strong_error_cell(const ExperimentConfig& cfg, double epsilon) {
  ExperimentConfig single = cfg;
  single.epsilon_ladder = {epsilon};
  return strong_error_ladder(single).rows.at(0);
}

OrderFit fit_order(const ErrorTable& table) {
  std::vector<double> lx, ly, se;
  for (const ErrorRow& r : table.rows) {
    if (r.excluded || !(r.error > 0.0) || !std::isfinite(r.error)) continue;
    lx.push_back(std::log(r.epsilon));
    ly.push_back(std::log(r.error));
    se.push_back(r.standard_error);
  }
  const std::size_t n = lx.size();
  if (n < 3)
    throw InsufficientDataError("fit_order: need >= 3 usable rows, have " +
                                std::to_string(n));

  bool all_positive_se = true;
  for (double s : se)
    if (!(s > 0.0)) all_positive_se = false;
  std::vector<double> w(n, 1.0);
  if (all_positive_se)
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / (se[i] * se[i]);

  double sw = 0, swx = 0, swy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    swx += w[i] * lx[i];
    swy += w[i] * ly[i];
  }
  const double mx = swx / sw, my = swy / sw;
  double sxx = 0, sxy = 0, sst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (lx[i] - mx) * (lx[i] - mx);
    sxy += w[i] * (lx[i] - mx) * (ly[i] - my);
    sst += w[i] * (ly[i] - my) * (ly[i] - my);
  }
  OrderFit fit;
  fit.used_rows = int(n);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ssr += w[i] * r * r;
  }
  fit.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  if (n > 2) {
    const double s2 = ssr / double(n - 2);
    fit.slope_halfwidth = 1.96 * std::sqrt(s2 / sxx);
  }
  return fit;
}

}  // namespace sfavg
