#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sfavg/config.hpp"
#include "sfavg/io.hpp"

using namespace sfavg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "sfavg_io_test";
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("parse_config: defaults plus overrides") {
  const auto cfg = parse_config(R"({"model":"linear","basis_size":32,"seed":7})");
  CHECK(cfg.model == "linear");
  CHECK(cfg.basis_size == 32);
  CHECK(cfg.seed == 7);
  CHECK(cfg.T == 0.5);
  CHECK(cfg.epsilon_ladder.size() == 7);
  CHECK(cfg.phi == "tanh_mode1");
}

TEST_CASE("parse_config: unknown keys are rejected with the key named") {
  try {
    parse_config(R"({"model":"tanh","mystery_knob":3})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.details().size() == 1);
    CHECK(e.details()[0].find("mystery_knob") != std::string::npos);
  }
}

TEST_CASE("parse_config: type and range violations are all collected") {
  try {
    parse_config(R"({"model":"tanh","T":-1,"basis_size":"big","samples":0})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.details().size() >= 3);
  }
}

TEST_CASE("parse_config: epsilon ladder must be positive and strictly decreasing") {
  CHECK_THROWS_AS(parse_config(R"({"epsilon_ladder":[0.1,0.2]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"epsilon_ladder":[0.2,0.2]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"epsilon_ladder":[0.2,-0.1]})"), ConfigError);
  CHECK_NOTHROW(parse_config(R"({"epsilon_ladder":[0.2,0.1,0.05]})"));
}

TEST_CASE("parse_config: malformed JSON is a ConfigError") {
  CHECK_THROWS_AS(parse_config("{model: tanh"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2,3]"), ConfigError);
}

TEST_CASE("content id: stable for equal configs, sensitive to changes") {
  const auto a = parse_config(R"({"model":"tanh"})");
  const auto b = parse_config(R"({"model":"tanh"})");
  auto c = a;
  c.seed = 999;
  CHECK(config_content_id(a) == config_content_id(b));
  CHECK(config_content_id(a) != config_content_id(c));
}

TEST_CASE("round trip: render then parse keeps every field") {
  auto cfg = parse_config(R"({"model":"linear","kappa":2.5,"dealias":true})");
  cfg.epsilon_ladder = {0.5, 0.1};
  const auto back = parse_config(config_to_json_string(cfg));
  CHECK(back.model == cfg.model);
  CHECK(back.kappa == cfg.kappa);
  CHECK(back.dealias == cfg.dealias);
  CHECK(back.epsilon_ladder == cfg.epsilon_ladder);
  CHECK(config_content_id(back) == config_content_id(cfg));
}

TEST_CASE("csv writers: identical tables produce identical bytes") {
  const std::string dir = temp_dir();
  ErrorTable t;
  t.error_kind = "strong";
  t.rows = {{0.125, 0.037, 0.0021, 200, false}, {0.0625, 0.026, 0.0014, 200, true}};
  write_error_table_csv(dir + "/a.csv", t);
  write_error_table_csv(dir + "/b.csv", t);
  const std::string a = slurp(dir + "/a.csv");
  CHECK(a == slurp(dir + "/b.csv"));
  CHECK(a.find("epsilon,error,standard_error,samples,excluded_flag") == 0);
  CHECK(a.find(",1\n") != std::string::npos);  // excluded flag serialized
}

TEST_CASE("format_double: round-trips through text exactly") {
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -7.25e-19, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("manifest and error report land where promised") {
  const std::string dir = temp_dir();
  const auto cfg = parse_config(R"({"model":"tanh"})");
  write_manifest(dir, cfg, "strong-order");
  const std::string manifest = slurp(dir + "/manifest.json");
  CHECK(manifest.find("\"command\": \"strong-order\"") != std::string::npos);
  CHECK(manifest.find("content_id") != std::string::npos);

  write_error_report(dir, "schema", {"T: must be > 0"});
  const std::string report = slurp(dir + "/error.json");
  CHECK(report.find("schema") != std::string::npos);
  CHECK(report.find("T: must be > 0") != std::string::npos);
}

TEST_CASE("order fit json carries slope, band and status") {
  const std::string dir = temp_dir();
  OrderFit fit{0.51, -0.3, 0.996, 0.04, 7};
  write_order_fit_json(dir + "/fit.json", fit, 0.35, 0.65, "ok");
  const std::string text = slurp(dir + "/fit.json");
  CHECK(text.find("\"slope\": 0.51") != std::string::npos);
  CHECK(text.find("\"status\": \"ok\"") != std::string::npos);
}
