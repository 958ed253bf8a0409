#include "sfavg/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sfavg {

namespace {

using nlohmann::json;

const std::set<std::string>& schema_keys() {
  static const std::set<std::string> keys = {
      "model",         "kappa",        "basis_size",   "epsilon_ladder",
      "epsilon",       "T",            "dt_macro",     "micro_substeps",
      "samples",       "seed",         "burn_in",      "fbar_horizon",
      "fbar_ensemble", "dt_fast",      "gh_nodes",     "phi",
      "init_regularity", "mixing_t_max", "mixing_points", "mixing_ensemble",
      "dealias",       "output_dir",   "threads"};
  return keys;
}

template <typename T>
void read_field(const json& j, const char* key, T& out, std::vector<std::string>& errors) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    errors.push_back(std::string(key) + ": wrong type");
  }
}

void validate(const ExperimentConfig& c, std::vector<std::string>& errors) {
  auto require = [&errors](bool ok, const char* msg) {
    if (!ok) errors.push_back(msg);
  };
  require(!c.model.empty(), "model: must be non-empty");
  require(c.kappa > 0.0 || c.model == "zero", "kappa: must be > 0");
  require(c.basis_size >= 1, "basis_size: must be >= 1");
  require(!c.epsilon_ladder.empty(), "epsilon_ladder: must be non-empty");
  for (std::size_t i = 0; i < c.epsilon_ladder.size(); ++i) {
    if (!(c.epsilon_ladder[i] > 0.0)) {
      errors.push_back("epsilon_ladder: entries must be > 0");
      break;
    }
    if (i > 0 && !(c.epsilon_ladder[i] < c.epsilon_ladder[i - 1])) {
      errors.push_back("epsilon_ladder: entries must be strictly decreasing");
      break;
    }
  }
  require(c.epsilon > 0.0, "epsilon: must be > 0");
  require(c.T > 0.0, "T: must be > 0");
  require(c.dt_macro > 0.0, "dt_macro: must be > 0");
  require(c.micro_substeps >= 0, "micro_substeps: must be >= 0 (0 = auto)");
  require(c.samples >= 1, "samples: must be >= 1");
  require(c.burn_in >= 0.0, "burn_in: must be >= 0 (0 = auto)");
  require(c.fbar_horizon >= 0.0, "fbar_horizon: must be >= 0 (0 = auto)");
  require(c.fbar_ensemble >= 1, "fbar_ensemble: must be >= 1");
  require(c.dt_fast >= 0.0, "dt_fast: must be >= 0 (0 = auto)");
  require(c.gh_nodes >= 40, "gh_nodes: must be >= 40");
  require(c.init_regularity >= 0.0, "init_regularity: must be >= 0");
  require(c.mixing_t_max > 0.0, "mixing_t_max: must be > 0");
  require(c.mixing_points >= 2, "mixing_points: must be >= 2");
  require(c.mixing_ensemble >= 2, "mixing_ensemble: must be >= 2");
  require(!c.output_dir.empty(), "output_dir: must be non-empty");
  require(c.threads >= 0, "threads: must be >= 0 (0 = hardware)");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON", {e.what()});
  }
  if (!j.is_object()) throw ConfigError("config must be a flat JSON object", {});

  std::vector<std::string> errors;
  for (const auto& item : j.items()) {
    if (!schema_keys().count(item.key()))
      errors.push_back(item.key() + ": unknown key (strict schema)");
  }

  ExperimentConfig c;
  read_field(j, "model", c.model, errors);
  read_field(j, "kappa", c.kappa, errors);
  read_field(j, "basis_size", c.basis_size, errors);
  read_field(j, "epsilon_ladder", c.epsilon_ladder, errors);
  read_field(j, "epsilon", c.epsilon, errors);
  read_field(j, "T", c.T, errors);
  read_field(j, "dt_macro", c.dt_macro, errors);
  read_field(j, "micro_substeps", c.micro_substeps, errors);
  read_field(j, "samples", c.samples, errors);
  read_field(j, "seed", c.seed, errors);
  read_field(j, "burn_in", c.burn_in, errors);
  read_field(j, "fbar_horizon", c.fbar_horizon, errors);
  read_field(j, "fbar_ensemble", c.fbar_ensemble, errors);
  read_field(j, "dt_fast", c.dt_fast, errors);
  read_field(j, "gh_nodes", c.gh_nodes, errors);
  read_field(j, "phi", c.phi, errors);
  read_field(j, "init_regularity", c.init_regularity, errors);
  read_field(j, "mixing_t_max", c.mixing_t_max, errors);
  read_field(j, "mixing_points", c.mixing_points, errors);
  read_field(j, "mixing_ensemble", c.mixing_ensemble, errors);
  read_field(j, "dealias", c.dealias, errors);
  read_field(j, "output_dir", c.output_dir, errors);
  read_field(j, "threads", c.threads, errors);

  validate(c, errors);
  if (!errors.empty()) throw ConfigError("config rejected by the strict schema", errors);
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file", {path + ": unreadable"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json_string(const ExperimentConfig& c) {
  json j;
  j["model"] = c.model;
  j["kappa"] = c.kappa;
  j["basis_size"] = c.basis_size;
  j["epsilon_ladder"] = c.epsilon_ladder;
  j["epsilon"] = c.epsilon;
  j["T"] = c.T;
  j["dt_macro"] = c.dt_macro;
  j["micro_substeps"] = c.micro_substeps;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["burn_in"] = c.burn_in;
  j["fbar_horizon"] = c.fbar_horizon;
  j["fbar_ensemble"] = c.fbar_ensemble;
  j["dt_fast"] = c.dt_fast;
  j["gh_nodes"] = c.gh_nodes;
  j["phi"] = c.phi;
  j["init_regularity"] = c.init_regularity;
  j["mixing_t_max"] = c.mixing_t_max;
  j["mixing_points"] = c.mixing_points;
  j["mixing_ensemble"] = c.mixing_ensemble;
  j["dealias"] = c.dealias;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  return j.dump(2);
}

std::string config_content_id(const ExperimentConfig& cfg) {
  const std::string s = config_to_json_string(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace sfavg
