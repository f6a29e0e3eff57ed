#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"

using namespace ising_ais::app;
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ising_ais_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kSmallSquare = R"({
  "model": {"family": "square", "n1": 4, "n2": 4,
            "boundary": {"type": "sides", "left": 1, "right": 1, "top": -1, "bottom": -1}},
  "beta": 0.5, "levels": 30, "paths": 40, "burnin_steps": 10, "steps_per_level": 1, "base_seed": 7
})";

}  // namespace

TEST_CASE("config parsing is strict") {
  auto parse = [](const std::string& text) { return config_from_json(ordered_json::parse(text)); };
  CHECK_NOTHROW(parse(kSmallSquare));

  auto field_of = [&](const std::string& text) {
    try {
      parse(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of(R"({"model": {"family": "square", "n1": 4, "n2": 4, "boundary": {"type": "sides",
      "left": 1, "right": 1, "top": -1, "bottom": -1}}, "beta": 0.5, "paths": 3, "lvls": 4})") == "lvls");
  CHECK(field_of(R"({"model": {"family": "hex"}, "beta": 0.5})") == "model.family");
  CHECK(field_of(R"({"model": {"family": "square", "n1": 4, "n2": 4, "boundary": {"type": "sides",
      "left": 2, "right": 1, "top": -1, "bottom": -1}}, "beta": 0.5})") == "model.boundary.left");
  CHECK(field_of(R"({"model": {"family": "square", "n1": 4, "n2": 4, "boundary": {"type": "sides",
      "left": 1, "right": 1, "top": -1, "bottom": -1}}, "beta": -0.5})") == "beta");
  CHECK(field_of(R"({"model": {"family": "square", "n1": 4, "n2": 4, "boundary": {"type": "sides",
      "left": 1, "right": 1, "top": -1, "bottom": -1}}, "beta": 0.5, "paths": 0})") == "paths");
  CHECK(field_of(R"({"model": {"family": "disk", "mesh_size": 1.2, "boundary": {"type": "sixty_degree"}},
      "beta": 0.3})") == "model.mesh_size");
  CHECK(field_of(R"({"beta": 0.3})") == "model");
}

TEST_CASE("config round-trips through its JSON form") {
  for (const char* text :
       {kSmallSquare,
        R"({"model": {"family": "square", "n1": 5, "n2": 3, "boundary": {"type": "quadrants", "signs": [1, -1, 1, -1]}},
            "beta": 0.5, "output_dir": "x"})",
        R"({"model": {"family": "disk", "mesh_size": 0.1, "seed": 4, "boundary": {"type": "arcs",
            "arcs": [{"start_deg": 0, "end_deg": 200, "value": 1}, {"start_deg": 200, "end_deg": 360, "value": -1}]}},
            "beta": 0.3, "levels": 10})",
        R"({"model": {"family": "explicit", "n_interior": 2, "edges": [[0, 1]], "field": [1.5, -2]}, "beta": 1})"}) {
    const auto cfg = config_from_json(ordered_json::parse(text));
    const auto j = config_to_json(cfg);
    CHECK(config_to_json(config_from_json(j)) == j);
  }
}

TEST_CASE("run writes artifacts that report verifies") {
  const auto dir = scratch("run");
  const auto cfg = write_config(dir, kSmallSquare);
  std::ostringstream out, err;
  RunOptions opts;
  opts.output_dir = dir / "out";
  opts.history = true;
  REQUIRE(cmd_run(cfg, opts, out, err) == kOk);
  for (const char* f : {"graph.json", "weights.csv", "variance_curve.csv", "report.json", "history.csv",
                        "mean_spin.csv"}) {
    CHECK(fs::exists(dir / "out" / f));
  }
  CHECK(out.str().find("efficiency ") != std::string::npos);

  const auto report = ordered_json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["K"] == 40);
  CHECK(report["L"] == 30);
  CHECK(report["config"] == config_to_json(load_config(cfg)));
  CHECK(config_to_json(config_from_json(report["config"])) == report["config"]);
  const double eff = report["efficiency"].get<double>();
  CHECK(eff > 0.0);
  CHECK(eff <= 1.0);
  CHECK(report["iterations_per_effective_sample"].get<double>() == doctest::Approx(30 / eff));

  const std::string weights = slurp(dir / "out" / "weights.csv");
  CHECK(weights.rfind("path_id,log_weight\n0,", 0) == 0);
  CHECK(slurp(dir / "out" / "variance_curve.csv").rfind("level,theta,var_log_w_normalized\n1,", 0) == 0);

  std::ostringstream rout, rerr;
  CHECK(cmd_report(dir / "out", rout, rerr) == kOk);
  CHECK(rout.str().find("verified") != std::string::npos);

  SUBCASE("same config and seed reproduce every artifact byte for byte") {
    std::ostringstream o2, e2;
    RunOptions again = opts;
    again.output_dir = dir / "again";
    again.workers = 3;
    REQUIRE(cmd_run(cfg, again, o2, e2) == kOk);
    for (const char* f : {"graph.json", "weights.csv", "variance_curve.csv", "report.json", "history.csv"}) {
      CHECK(slurp(dir / "out" / f) == slurp(dir / "again" / f));
    }
  }
  SUBCASE("tampered weights are detected") {
    std::string tampered = weights;
    const auto pos = tampered.find("\n3,");
    REQUIRE(pos != std::string::npos);
    tampered.insert(pos + 3, "1");
    std::ofstream(dir / "out" / "weights.csv", std::ios::binary | std::ios::trunc) << tampered;
    std::ostringstream o3, e3;
    CHECK(cmd_report(dir / "out", o3, e3) == kFailure);
    CHECK(e3.str().find("mismatch") != std::string::npos);
  }
  SUBCASE("tampered history is detected") {
    std::string history = slurp(dir / "out" / "history.csv");
    const auto pos = history.find("\n5,");
    history.insert(pos + 3, "3");
    std::ofstream(dir / "out" / "history.csv", std::ios::binary | std::ios::trunc) << history;
    std::ostringstream o3, e3;
    CHECK(cmd_report(dir / "out", o3, e3) == kFailure);
  }
}

TEST_CASE("report errors on missing or corrupt artifacts") {
  const auto dir = scratch("empty");
  std::ostringstream out, err;
  CHECK(cmd_report(dir, out, err) == kIoError);
  CHECK(cmd_report(dir / "does-not-exist", out, err) == kIoError);
  std::ofstream(dir / "report.json") << "{not json";
  std::ofstream(dir / "weights.csv") << "path_id,log_weight\n0,1\n";
  CHECK(cmd_report(dir, out, err) == kIoError);
}

TEST_CASE("single-path run flags diagnostics as unavailable") {
  const auto dir = scratch("k1");
  std::string text = kSmallSquare;
  text.replace(text.find("\"paths\": 40"), 11, "\"paths\": 1");
  const auto cfg = write_config(dir, text);
  std::ostringstream out, err;
  RunOptions opts;
  opts.output_dir = dir / "out";
  REQUIRE(cmd_run(cfg, opts, out, err) == kOk);
  const auto report = ordered_json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["diagnostics_available"] == false);
  CHECK(report["efficiency"].is_null());
  CHECK(out.str().find("diagnostics unavailable") != std::string::npos);
  std::ostringstream rout, rerr;
  CHECK(cmd_report(dir / "out", rout, rerr) == kOk);
}

TEST_CASE("run exit codes") {
  const auto dir = scratch("codes");
  std::ostringstream out, err;
  CHECK(cmd_run(write_config(dir, R"({"model": {"family": "square"}, "beta": 0.5})"), {}, out, err) ==
        kConfigError);
  CHECK(err.str().find("model.n1") != std::string::npos);
  CHECK(cmd_run(write_config(dir, "{oops"), {}, out, err) == kConfigError);
  CHECK(cmd_run(dir / "missing.json", {}, out, err) == kIoError);

  // Output path blocked by a regular file.
  std::ofstream(dir / "blocker") << "x";
  RunOptions opts;
  opts.output_dir = dir / "blocker" / "sub";
  CHECK(cmd_run(write_config(dir, kSmallSquare), opts, out, err) == kIoError);
}

TEST_CASE("output directory resolution") {
  ExperimentConfig cfg;
  RunOptions opts;
  ::setenv("ISING_AIS_OUTPUT_ROOT", "/tmp/root-x", 1);
  CHECK(resolve_output_dir(cfg, "cfgs/ex1.json", opts) == fs::path("/tmp/root-x/ex1"));
  cfg.output_dir = "from-config";
  CHECK(resolve_output_dir(cfg, "cfgs/ex1.json", opts) == fs::path("from-config"));
  opts.output_dir = "from-flag";
  CHECK(resolve_output_dir(cfg, "cfgs/ex1.json", opts) == fs::path("from-flag"));
  ::unsetenv("ISING_AIS_OUTPUT_ROOT");
}

TEST_CASE("oracle command") {
  const auto dir = scratch("oracle");
  std::ostringstream out, err;
  const auto one = write_config(
      dir, R"({"model": {"family": "explicit", "n_interior": 1, "edges": [], "field": [2]}, "beta": 0.5})");
  REQUIRE(cmd_oracle(one, {}, out, err) == kOk);
  const auto j = ordered_json::parse(out.str());
  CHECK(j["z_ratio"].get<double>() == doctest::Approx(1.543081).epsilon(1e-6));
  CHECK(j["log_z_theta0"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(j["expectations"]["magnetization"].get<double>() == doctest::Approx(std::tanh(1.0)).epsilon(1e-14));

  std::ostringstream out2;
  const auto three = write_config(dir, R"({"model": {"family": "square", "n1": 3, "n2": 3,
      "boundary": {"type": "sides", "left": 1, "right": 1, "top": -1, "bottom": -1}}, "beta": 0.5})");
  REQUIRE(cmd_oracle(three, {.detailed_balance = true}, out2, err) == kOk);
  const auto k = ordered_json::parse(out2.str());
  CHECK(std::abs(k["expectations"]["magnetization"].get<double>()) < 1e-12);
  CHECK(k["expectations"]["positive_profile"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  for (const auto& row : k["detailed_balance"]) {
    CHECK(row["detailed_balance_residual"].get<double>() <= 1e-10);
    CHECK(row["stationarity_residual"].get<double>() <= 1e-10);
  }

  std::ostringstream err3;
  const auto big = write_config(dir, R"({"model": {"family": "square", "n1": 5, "n2": 5,
      "boundary": {"type": "sides", "left": 1, "right": 1, "top": -1, "bottom": -1}}, "beta": 0.5})");
  CHECK(cmd_oracle(big, {}, out, err3) == kSizeGuard);
  CHECK(err3.str().find("limit is 24") != std::string::npos);
  CHECK(cmd_oracle(write_config(dir, R"({"beta": 1})"), {}, out, err) == kConfigError);
}
