#include "sfavg/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sfavg {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void ensure_dir(const std::string& path) {
  std::filesystem::create_directories(path);
}

void write_error_table_csv(const std::string& path, const ErrorTable& table) {
  auto out = open_out(path);
  out << "epsilon,error,standard_error,samples,excluded_flag\n";
  for (const ErrorRow& r : table.rows)
    out << format_double(r.epsilon) << ',' << format_double(r.error) << ','
        << format_double(r.standard_error) << ',' << r.samples << ','
        << (r.excluded ? 1 : 0) << '\n';
}

void write_order_fit_json(const std::string& path, const OrderFit& fit, double band_lo,
                          double band_hi, const std::string& status) {
  json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["slope_confidence_halfwidth"] = fit.slope_halfwidth;
  j["used_rows"] = fit.used_rows;
  j["band"] = {band_lo, band_hi};
  j["status"] = status;
  open_out(path) << j.dump(2) << '\n';
}

void write_fbar_csv(const std::string& path, const FbarEstimate& est) {
  auto out = open_out(path);
  out << "mode,value,standard_error\n";
  for (int k = 0; k < est.value.basis_size(); ++k)
    out << (k + 1) << ',' << format_double(est.value[k]) << ','
        << format_double(est.standard_error[std::size_t(k)]) << '\n';
}

void write_mixing_csv(const std::string& path, const MixingReport& rep) {
  auto out = open_out(path);
  out << "t,estimate,standard_error,usable\n";
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    out << format_double(rep.times[i]) << ',' << format_double(rep.estimates[i]) << ','
        << format_double(rep.standard_errors[i]) << ',' << (rep.usable[i] ? 1 : 0) << '\n';
}

void write_mixing_fit_json(const std::string& path, const MixingReport& rep) {
  json j;
  j["decay_rate"] = rep.decay_rate;
  j["amplitude"] = rep.amplitude;
  j["r_squared"] = rep.r_squared;
  j["verdict"] = rep.verdict;
  open_out(path) << j.dump(2) << '\n';
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,mode,x_k,y_k\n";
  for (const SlowFastState& st : traj.states)
    for (int k = 0; k < st.x.basis_size(); ++k)
      out << format_double(st.t) << ',' << (k + 1) << ',' << format_double(st.x[k]) << ','
          << format_double(st.y[k]) << '\n';
}

void write_field_path_csv(const std::string& path,
                          const std::vector<std::pair<double, SpectralField>>& path_data) {
  auto out = open_out(path);
  out << "t,mode,x_k\n";
  for (const auto& [t, field] : path_data)
    for (int k = 0; k < field.basis_size(); ++k)
      out << format_double(t) << ',' << (k + 1) << ',' << format_double(field[k]) << '\n';
}

void write_manifest(const std::string& dir, const ExperimentConfig& cfg,
                    const std::string& command) {
  json j;
  j["command"] = command;
  j["config"] = json::parse(config_to_json_string(cfg));
  j["content_id"] = config_content_id(cfg);
  j["seed"] = cfg.seed;
  j["model"] = cfg.model;
  j["version"] = kLibraryVersion;
  const auto now = std::chrono::system_clock::now();
  j["written_at_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  open_out(dir + "/manifest.json") << j.dump(2) << '\n';
}

void write_error_report(const std::string& dir, const std::string& kind,
                        const std::vector<std::string>& details) {
  json j;
  j["error"] = kind;
  j["details"] = details;
  ensure_dir(dir);
  open_out(dir + "/error.json") << j.dump(2) << '\n';
}

}  // namespace sfavg
