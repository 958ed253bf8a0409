#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sfavg/averaging.hpp"
#include "sfavg/config.hpp"
#include "sfavg/experiments.hpp"
#include "sfavg/simulator.hpp"

namespace sfavg {

/// Shortest round-trippable decimal rendering of a double ("%.17g"), so a
/// rerun under the same seed produces byte-identical CSV bodies.
std::string format_double(double v);

void ensure_dir(const std::string& path);

/// CSV columns: epsilon,error,standard_error,samples,excluded_flag.
void write_error_table_csv(const std::string& path, const ErrorTable& table);

/// OrderFit plus its acceptance band and status as JSON.
void write_order_fit_json(const std::string& path, const OrderFit& fit, double band_lo,
                          double band_hi, const std::string& status);

/// CSV columns: mode,value,standard_error (+ JSON sidecar with the config).
void write_fbar_csv(const std::string& path, const FbarEstimate& est);

/// CSV columns: t,estimate,standard_error,usable; fit parameters as JSON.
void write_mixing_csv(const std::string& path, const MixingReport& rep);
void write_mixing_fit_json(const std::string& path, const MixingReport& rep);

/// Long-format CSV: t,mode,x_k,y_k for every recorded macro step.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Averaged (deterministic) trajectory: t,mode,x_k.
void write_field_path_csv(const std::string& path,
                          const std::vector<std::pair<double, SpectralField>>& path_data);

/// Manifest: config echo, seed, model, content id, library version, wall time.
/// Timestamps are confined to the manifest so data files stay reproducible.
void write_manifest(const std::string& dir, const ExperimentConfig& cfg,
                    const std::string& command);

/// JSON error report for machine consumption on failure paths.
void write_error_report(const std::string& dir, const std::string& kind,
                        const std::vector<std::string>& details);

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace sfavg
