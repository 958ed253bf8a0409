// sfavg: batch experiment runner for the slow-fast averaging library.
//
// Exit codes: 0 success, 2 config schema violation, 3 order command outside
// its acceptance band, 4 numerical blow-up, 1 anything else. Failures leave a
// machine-readable error.json in the output directory.

#include <cstdio>
#include <fstream>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfavg/averaging.hpp"
#include "sfavg/config.hpp"
#include "sfavg/experiments.hpp"
#include "sfavg/io.hpp"
#include "sfavg/model.hpp"
#include "sfavg/simulator.hpp"

#include <json.hpp>

namespace {

using namespace sfavg;

struct CliOptions {
  std::string config_path;
  std::string output_override;
  int threads_override = -1;
  std::optional<std::uint64_t> seed_override;
};

ExperimentConfig load_with_overrides(const CliOptions& opt) {
  ExperimentConfig cfg = load_config_file(opt.config_path);
  if (!opt.output_override.empty()) cfg.output_dir = opt.output_override;
  if (opt.threads_override >= 0) cfg.threads = opt.threads_override;
  if (opt.seed_override) cfg.seed = *opt.seed_override;
  return cfg;
}

ModelSpec make_model(const ExperimentConfig& cfg) {
  ModelSpec m = model_by_name(cfg.model, cfg.kappa);
  m.dealias = cfg.dealias;
  return m;
}

double resolved_burn_in(const ExperimentConfig& cfg, const ModelSpec& m) {
  return cfg.burn_in > 0.0 ? cfg.burn_in : default_burn_in(m);
}

double resolved_horizon(const ExperimentConfig& cfg, const ModelSpec& m) {
  return cfg.fbar_horizon > 0.0 ? cfg.fbar_horizon : default_fbar_horizon(m);
}

double resolved_dt_fast(const ExperimentConfig& cfg, const ModelSpec& m) {
  return cfg.dt_fast > 0.0 ? cfg.dt_fast : default_dt_fast(m);
}

RowLogger stdout_logger() {
  return [](const ErrorRow& r) {
    std::printf("eps=%-12g error=%-14g se=%-12g samples=%ld%s\n", r.epsilon, r.error,
                r.standard_error, r.samples, r.excluded ? " [noise-dominated]" : "");
    std::fflush(stdout);
  };
}

int run_order_command(const ExperimentConfig& cfg, const std::string& kind) {
  ensure_dir(cfg.output_dir);
  ErrorTable table;
  double lo = kStrongSlopeLo, hi = kStrongSlopeHi;
  if (kind == "strong-order") {
    table = strong_error_ladder(cfg, stdout_logger());
  } else if (kind == "hasminskii") {
    table = hasminskii_gap_ladder(cfg, stdout_logger());
  } else {
    table = weak_error_ladder(cfg, stdout_logger());
    lo = kWeakSlopeLo;
    hi = kWeakSlopeHi;
  }
  const std::string stem = cfg.output_dir + "/" + kind;
  write_error_table_csv(stem + ".csv", table);
  write_manifest(cfg.output_dir, cfg, kind);

  OrderFit fit;
  try {
    fit = fit_order(table);
  } catch (const InsufficientDataError& e) {
    // Weak rows can all drown in Monte Carlo noise; that outcome is reported,
    // not failed.
    write_order_fit_json(stem + "_fit.json", OrderFit{}, lo, hi, "inconclusive");
    std::printf("%s: inconclusive (%s)\n", kind.c_str(), e.what());
    return kind == "weak-order" ? 0 : 3;
  }
  const bool in_band = fit.slope >= lo && fit.slope <= hi;
  write_order_fit_json(stem + "_fit.json", fit, lo, hi, in_band ? "ok" : "outside-band");
  std::printf("%s: slope=%.4f (+-%.4f) R^2=%.4f rows=%d band=[%.2f,%.2f] -> %s\n",
              kind.c_str(), fit.slope, fit.slope_halfwidth, fit.r_squared, fit.used_rows,
              lo, hi, in_band ? "ok" : "OUTSIDE BAND");
  if (!in_band) {
    write_error_report(cfg.output_dir, "order-band",
                       {kind + ": fitted slope " + format_double(fit.slope) +
                        " outside [" + format_double(lo) + ", " + format_double(hi) + "]"});
    return 3;
  }
  return 0;
}

int run_simulate(const ExperimentConfig& cfg) {
  ensure_dir(cfg.output_dir);
  const ModelSpec m = make_model(cfg);
  const SpectralField x0 = initial_field(cfg.basis_size, cfg.init_regularity);
  const SpectralField y0 = initial_field(cfg.basis_size, cfg.init_regularity);
  const StepperConfig stepper{cfg.dt_macro, cfg.micro_substeps};
  const Trajectory traj =
      simulate(x0, y0, cfg.epsilon, cfg.T, m, stepper, NoisePlan{cfg.seed, 0u});
  write_trajectory_csv(cfg.output_dir + "/trajectory.csv", traj);
  write_manifest(cfg.output_dir, cfg, "simulate");
  std::printf("simulate: %zu macro steps written\n", traj.states.size() - 1);
  return 0;
}

int run_fbar(const ExperimentConfig& cfg) {
  ensure_dir(cfg.output_dir);
  const ModelSpec m = make_model(cfg);
  const SpectralField x = initial_field(cfg.basis_size, cfg.init_regularity);
  const auto est = estimate_fbar(x, m, resolved_burn_in(cfg, m), resolved_horizon(cfg, m),
                                 cfg.fbar_ensemble, resolved_dt_fast(cfg, m),
                                 NoisePlan{cfg.seed, 0u}, cfg.threads);
  write_fbar_csv(cfg.output_dir + "/fbar.csv", est);
  if (m.linear_in_y) {
    const SpectralField oracle = gibbs_fbar_oracle(x, m, cfg.gh_nodes);
    FbarEstimate as_est;
    as_est.value = oracle;
    as_est.standard_error.assign(std::size_t(oracle.basis_size()), 0.0);
    write_fbar_csv(cfg.output_dir + "/fbar_oracle.csv", as_est);
    std::printf("fbar: |estimate - oracle| = %g (aggregate SE %g)\n",
                (est.value - oracle).norm(), est.aggregate_standard_error());
  } else {
    std::printf("fbar: aggregate SE %g\n", est.aggregate_standard_error());
  }
  write_manifest(cfg.output_dir, cfg, "fbar");
  return 0;
}

int run_averaged(const ExperimentConfig& cfg) {
  ensure_dir(cfg.output_dir);
  const ModelSpec m = make_model(cfg);
  const SpectralField x0 = initial_field(cfg.basis_size, cfg.init_regularity);
  const FbarFn fbar = make_fbar_reference(m, cfg);
  const auto traj = solve_averaged(x0, fbar, m.op_a, cfg.T, cfg.dt_macro);
  write_field_path_csv(cfg.output_dir + "/averaged.csv", traj);
  write_manifest(cfg.output_dir, cfg, "averaged");
  std::printf("averaged: %zu steps written\n", traj.size() - 1);
  return 0;
}

int run_mixing(const ExperimentConfig& cfg) {
  ensure_dir(cfg.output_dir);
  const ModelSpec m = make_model(cfg);
  const SpectralField x = initial_field(cfg.basis_size, cfg.init_regularity);
  const SpectralField y = initial_field(cfg.basis_size, cfg.init_regularity);
  std::vector<double> grid;
  for (int i = 0; i < cfg.mixing_points; ++i)
    grid.push_back(cfg.mixing_t_max * double(i) / double(cfg.mixing_points - 1));
  const auto rep = mixing_diagnostic(x, y, m, grid, cfg.mixing_ensemble,
                                     resolved_dt_fast(cfg, m), NoisePlan{cfg.seed, 0u},
                                     cfg.threads, cfg.gh_nodes);
  write_mixing_csv(cfg.output_dir + "/mixing.csv", rep);
  write_mixing_fit_json(cfg.output_dir + "/mixing_fit.json", rep);
  write_manifest(cfg.output_dir, cfg, "mixing");
  std::printf("mixing: verdict=%s decay_rate=%.4f R^2=%.4f\n", rep.verdict.c_str(),
              rep.decay_rate, rep.r_squared);
  return 0;
}

int run_check_model(const ExperimentConfig& cfg) {
  ensure_dir(cfg.output_dir);
  const ModelSpec m = make_model(cfg);
  const auto rep = check_dissipativity(m, ScanBox{}, 41);
  nlohmann::json j;
  j["model"] = cfg.model;
  j["strict"] = rep.strict;
  j["margin"] = rep.margin;
  j["lg_empirical"] = rep.lg_empirical;
  j["lg_declared"] = rep.lg_declared;
  j["declared_consistent"] = rep.declared_consistent;
  j["weak_c"] = rep.weak_c;
  j["weak_C"] = rep.weak_C;
  std::ofstream out(cfg.output_dir + "/check_model.json");
  out << j.dump(2) << '\n';
  write_manifest(cfg.output_dir, cfg, "check-model");
  std::printf("check-model: strict=%s margin=%.6f L_g(scan)=%.6f\n",
              rep.strict ? "true" : "false", rep.margin, rep.lg_empirical);
  return 0;
}

int dispatch(const std::string& command, const CliOptions& opt) {
  const ExperimentConfig cfg = load_with_overrides(opt);
  if (command == "simulate") return run_simulate(cfg);
  if (command == "fbar") return run_fbar(cfg);
  if (command == "averaged") return run_averaged(cfg);
  if (command == "mixing") return run_mixing(cfg);
  if (command == "check-model") return run_check_model(cfg);
  return run_order_command(cfg, command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slow-fast averaging experiments"};
  app.require_subcommand(1);

  CliOptions opt;
  std::string output_dir_for_errors = ".";
  const std::vector<std::string> commands = {"simulate",  "fbar",       "averaged",
                                             "strong-order", "weak-order", "hasminskii",
                                             "mixing",    "check-model"};
  std::vector<CLI::App*> subs;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "experiment config (flat JSON)")
        ->required();
    sub->add_option("--output", opt.output_override, "override output_dir");
    sub->add_option("--threads", opt.threads_override, "cap worker threads");
    sub->add_option("--seed", opt.seed_override, "override the config seed");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  if (!opt.output_override.empty()) output_dir_for_errors = opt.output_override;

  try {
    return dispatch(command, opt);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    for (const auto& d : e.details()) std::fprintf(stderr, "  - %s\n", d.c_str());
    write_error_report(output_dir_for_errors, "schema", e.details());
    return 2;
  } catch (const BlowupError& e) {
    std::fprintf(stderr, "numerical blow-up: %s\n", e.what());
    write_error_report(output_dir_for_errors, "blow-up", {e.what()});
    return 4;
  } catch (const EvaluationError& e) {
    std::fprintf(stderr, "evaluation error: %s\n", e.what());
    write_error_report(output_dir_for_errors, "evaluation", {e.what()});
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    write_error_report(output_dir_for_errors, "error", {e.what()});
    return 1;
  }
}
