#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfavg {

/// A config file failed the strict schema; details carry one message per field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> details)
      : std::runtime_error(what), details_(std::move(details)) {}
  const std::vector<std::string>& details() const { return details_; }

 private:
  std::vector<std::string> details_;
};

/// Flat, strictly-validated experiment description. Every key in the file must
/// be one of the schema keys; every positive quantity is checked before a run
/// starts. Zero means "use the documented default policy" where noted.
struct ExperimentConfig {
  std::string model = "tanh";
  double kappa = 1.0;
  int basis_size = 64;
  std::vector<double> epsilon_ladder = {1.0 / 8,  1.0 / 16, 1.0 / 32, 1.0 / 64,
                                        1.0 / 128, 1.0 / 256, 1.0 / 512};
  double epsilon = 0.25;  // single-trajectory commands
  double T = 0.5;
  double dt_macro = 1.0 / 256.0;
  int micro_substeps = 0;  // 0 = ceil(10 h mu_1 / eps)
  long samples = 200;
  std::uint64_t seed = 12345;
  double burn_in = 0.0;       // 0 = 5/(mu_1 + kappa_eff)
  double fbar_horizon = 0.0;  // 0 = burn_in + 50/(mu_1 + kappa_eff)
  int fbar_ensemble = 32;
  double dt_fast = 0.0;  // 0 = 0.02/mu_1
  int gh_nodes = 48;
  std::string phi = "tanh_mode1";
  double init_regularity = 3.0;
  double mixing_t_max = 0.6;
  int mixing_points = 13;
  int mixing_ensemble = 4000;
  bool dealias = false;
  std::string output_dir = "out";
  int threads = 0;  // 0 = hardware concurrency
};

/// Parse and validate a flat JSON object. Unknown keys and invalid values are
/// collected into a ConfigError listing every offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical JSON rendering (sorted keys); used for manifests and hashing.
std::string config_to_json_string(const ExperimentConfig& cfg);

/// FNV-1a content identifier of the canonical rendering.
std::string config_content_id(const ExperimentConfig& cfg);

}  // namespace sfavg
