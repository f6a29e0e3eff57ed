#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "app.hpp"
#include "ising_ais/ais.hpp"
#include "ising_ais/diagnostics.hpp"
#include "ising_ais/oracle.hpp"
#include "ising_ais/sw.hpp"
#include "support/reference.hpp"

using namespace ising_ais;
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<double> read_curve(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  std::vector<double> v;
  while (std::getline(f, line)) v.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  return v;
}

Lattice example1(std::size_t n, double beta) {
  return build_square_lattice(n, n, SquareBoundary::sides(1, 1, -1, -1), beta);
}

Outcome marginal_identities() {
  const auto t0 = Clock::now();
  std::mt19937_64 eng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  const int graphs = 30;
  for (int trial = 0; trial < graphs; ++trial) {
    const std::size_t n = 2 + eng() % 8;
    const double beta = 0.1 + 1.4 * unit(eng);
    const auto g = testing::random_graph(eng, n, 14, beta, 2.0);
    const double scale = unit(eng);
    const auto pv = oracle::enumerate_pV(g, scale);
    const auto pve = oracle::enumerate_pVE(g, scale);
    const auto pe = oracle::enumerate_pE(g, scale);
    const std::size_t m = g.edges().size();
    std::vector<double> sum_w(std::size_t{1} << n, 0.0), sum_s(std::size_t{1} << m, 0.0);
    for (std::size_t j = 0; j < pve.prob.size(); ++j) {
      sum_w[j & ((std::size_t{1} << n) - 1)] += pve.prob[j];
      sum_s[j >> n] += pve.prob[j];
    }
    for (std::size_t s = 0; s < sum_w.size(); ++s) worst = std::max(worst, std::abs(sum_w[s] - pv.prob[s]));
    for (std::size_t w = 0; w < sum_s.size(); ++w) worst = std::max(worst, std::abs(sum_s[w] - pe.prob[w]));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 10.0,
          fmt("%d graphs, max |marginal - exact| = %.3g (tol 1e-12), %.2f s (limit 10 s)", graphs, worst, secs)};
}

Outcome detailed_balance() {
  const auto t0 = Clock::now();
  double worst_db = 0.0, worst_st = 0.0;
  int cases = 0;
  for (std::size_t n : {2, 3}) {
    for (bool zero_field : {true, false}) {
      for (double beta : {0.3, 0.5, 1.0}) {
        auto g = example1(n, beta).graph;
        if (zero_field) g = g.with_field(std::vector<double>(g.n_interior(), 0.0));
        for (double scale : {0.0, 0.5, 1.0}) {
          const auto pv = oracle::enumerate_pV(g, scale);
          const auto tm = oracle::exact_sw_transition(g, scale);
          worst_db = std::max(worst_db, oracle::detailed_balance_residual(pv, tm));
          worst_st = std::max(worst_st, oracle::stationarity_residual(pv, tm));
          ++cases;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst_db <= 1e-10 && worst_st <= 1e-10 && secs < 30.0,
          fmt("%d cases, detailed balance %.3g, stationarity %.3g (tol 1e-10), %.2f s (limit 30 s)", cases,
              worst_db, worst_st, secs)};
}

Outcome kernel_frequencies() {
  const int draws = 100000;
  double worst_z = 0.0;
  Rng rng(99, 3);
  for (double beta : {0.3, 0.5}) {
    const IsingGraph pair(2, {{0, 1}}, {0.0, 0.0}, beta);
    const SpinConfig aligned{{1, 1}};
    int on = 0;
    for (int k = 0; k < draws; ++k) on += activate_edges(pair, aligned, rng).active[0];
    const double p = bond_probability(beta);
    worst_z = std::max(worst_z, std::abs(on - draws * p) / std::sqrt(draws * p * (1 - p)));

    for (double h : {-2.0, 0.0, 2.0}) {
      ClusterPartition part;
      part.component = {0};
      part.field_sum = {h};
      int up = 0;
      for (int k = 0; k < draws; ++k) up += assign_clusters(part, beta, rng).spins[0] == 1;
      const double q = 1.0 / (1.0 + std::exp(-2.0 * beta * h));
      worst_z = std::max(worst_z, std::abs(up - draws * q) / std::sqrt(draws * q * (1 - q)));
    }
  }
  return {worst_z <= 3.0, fmt("10^5 draws per case, worst deviation %.2f sigma (limit 3)", worst_z)};
}

Outcome desk_unbiasedness() {
  const auto t0 = Clock::now();
  const auto g = example1(3, 0.5).graph;
  AisConfig cfg;
  cfg.num_paths = 10000;
  cfg.burnin_steps = 100;
  cfg.steps_per_level = 1;
  cfg.schedule = Schedule::equally_spaced(100);
  cfg.base_seed = 4;
  const auto paths = run_ensemble(g, cfg);
  const auto logw = final_log_weights(paths);

  const double ratio = oracle::exact_ais_mean_weight(g, cfg.schedule);
  double mean = 0.0, sq = 0.0;
  for (double lw : logw) mean += std::exp(lw);
  mean /= static_cast<double>(logw.size());
  for (double lw : logw) sq += (std::exp(lw) - mean) * (std::exp(lw) - mean);
  const double se = std::sqrt(sq / static_cast<double>(logw.size() - 1) / static_cast<double>(logw.size()));
  const double z_w = std::abs(mean - ratio) / se;

  const auto m = weighted_observable(paths, observables::magnetization);
  const double exact_m = oracle::exact_expectation(g, 1.0, observables::magnetization);
  const double z_m = std::abs(m.estimate - exact_m) / m.standard_error;
  const double secs = seconds_since(t0);
  return {z_w <= 4.0 && z_m <= 3.0 && secs < 60.0,
          fmt("mean weight %.6g vs Z(1)/Z(0) %.6g (%.2f SE, limit 4); E[M] %.4g vs %.4g (%.2f SE, limit 3); %.1f s",
              mean, ratio, z_w, m.estimate, exact_m, z_m, secs)};
}

app::ExperimentConfig square_config(const char* boundary, std::uint64_t seed) {
  return app::config_from_json(ordered_json::parse(fmt(
      R"({"model": {"family": "square", "n1": 40, "n2": 40, "boundary": %s},
          "beta": 0.5, "levels": 400, "paths": 500, "burnin_steps": 100, "steps_per_level": 1, "base_seed": %llu})",
      boundary, static_cast<unsigned long long>(seed))));
}

const char* kExample1 = R"({"type": "sides", "left": 1, "right": 1, "top": -1, "bottom": -1})";
const char* kExample2 = R"({"type": "quadrants", "signs": [1, -1, 1, -1]})";

struct RunArtifacts {
  int code = -1;
  ordered_json report;
  fs::path dir;
  double seconds = 0.0;
};

RunArtifacts run(const app::ExperimentConfig& cfg, const fs::path& dir, unsigned workers) {
  RunArtifacts r;
  r.dir = dir;
  fs::remove_all(dir);
  app::RunOptions opts;
  opts.workers = workers;
  std::ostringstream out, err;
  const auto t0 = Clock::now();
  r.code = app::run_experiment(cfg, dir, opts, out, err);
  r.seconds = seconds_since(t0);
  if (r.code == app::kOk) r.report = ordered_json::parse(slurp(dir / "report.json"));
  else std::fprintf(stderr, "run in %s failed: %s\n", dir.c_str(), err.str().c_str());
  return r;
}

double efficiency(const RunArtifacts& r) {
  return r.code == app::kOk ? r.report["efficiency"].get<double>() : std::nan("");
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "ising_ais_acceptance";
  fs::create_directories(root);
  int failures = 0;
  auto emit = [&](int id, const Outcome& o) {
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  emit(1, marginal_identities());
  emit(2, detailed_balance());
  emit(3, kernel_frequencies());
  emit(4, desk_unbiasedness());

  // Example 1 at full size, five seeds. The first seed also serves the
  // symmetry and determinism checks.
  std::vector<RunArtifacts> ex1;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ex1.push_back(run(square_config(kExample1, seed), root / fmt("example1_seed%llu", seed), 2));
  }

  {
    Outcome o;
    if (ex1[0].code != app::kOk) {
      o = {false, "example 1 run failed"};
    } else {
      const auto& p = ex1[0].report["observables"]["positive_profile"];
      const double est = p["estimate"].get<double>(), se = p["standard_error"].get<double>();
      const double z = std::abs(est - 0.5) / se;
      o = {z <= 3.0 && est > 0.0 && est < 1.0,
           fmt("40x40 example 1: P(M>0) = %.4f +- %.4f, %.2f SE from 0.5 (limit 3)", est, se, z)};
    }
    emit(5, o);
  }

  {
    std::vector<double> effs;
    double secs = 0.0;
    for (const auto& r : ex1) {
      effs.push_back(efficiency(r));
      secs += r.seconds;
    }
    std::vector<double> sorted = effs;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[2];
    const bool single_ok = effs[0] >= 0.13 && effs[0] <= 0.45;
    const bool median_ok = median >= 0.18 && median <= 0.36;
    emit(6, {single_ok && median_ok,
             fmt("efficiency seed 1 = %.4f (band [0.13, 0.45]); seeds 1-5 = %.4f %.4f %.4f %.4f %.4f, median %.4f "
                 "(band [0.18, 0.36]); %.1f s",
                 effs[0], effs[0], effs[1], effs[2], effs[3], effs[4], median, secs)});
  }

  {
    const auto r = run(square_config(kExample2, 1), root / "example2", 0);
    Outcome o{false, "example 2 run failed"};
    if (r.code == app::kOk) {
      const double eff = efficiency(r);
      const auto curve = read_curve(r.dir / "variance_curve.csv");
      o = {eff >= 0.04 && eff <= 0.20 && curve.back() > curve.front(),
           fmt("efficiency %.4f (band [0.04, 0.20]); variance curve %.4g at l=1 -> %.4g at l=L; %.1f s", eff,
               curve.front(), curve.back(), r.seconds)};
    }
    emit(7, o);
  }

  {
    Outcome o;
    std::string detail;
    for (const char* boundary : {R"({"type": "quadrants", "signs": [1, -1, 1, -1]})", R"({"type": "sixty_degree"})"}) {
      const auto cfg = app::config_from_json(ordered_json::parse(fmt(
          R"({"model": {"family": "disk", "mesh_size": 0.1, "seed": 0, "boundary": %s},
              "beta": 0.3, "levels": 400, "paths": 200, "burnin_steps": 100, "steps_per_level": 1, "base_seed": 1})",
          boundary)));
      const bool quadrants = std::string(boundary).find("quadrants") != std::string::npos;
      const auto r = run(cfg, root / (quadrants ? "disk_quadrants" : "disk_sixty"), 0);
      if (r.code != app::kOk) {
        o.pass = false;
        detail += quadrants ? "quadrant disk run failed; " : "sixty-degree disk run failed; ";
        continue;
      }
      const double eff = efficiency(r);
      const auto curve = read_curve(r.dir / "variance_curve.csv");
      const bool curve_ok = std::all_of(curve.begin(), curve.end(), [](double v) { return std::isfinite(v) && v >= 0.0; });
      o.pass = o.pass && eff > 0.2 && curve_ok && curve.size() == 400;
      detail += fmt("%s: n=%d, efficiency %.4f (> 0.2), curve %s; ", quadrants ? "quadrants" : "sixty-degree",
                    r.report["n_interior"].get<int>(), eff, curve_ok ? "finite, non-negative" : "INVALID");
    }
    o.detail = detail.substr(0, detail.size() - 2);
    emit(8, o);
  }

  {
    const auto again = run(square_config(kExample1, 1), root / "example1_seed1_workers1", 1);
    Outcome o{false, "determinism rerun failed"};
    if (again.code == app::kOk && ex1[0].code == app::kOk) {
      const bool same = slurp(ex1[0].dir / "weights.csv") == slurp(again.dir / "weights.csv");
      o = {same, fmt("weights.csv with 2 workers vs 1 worker: %s", same ? "byte-identical" : "DIFFERENT")};
    }
    emit(9, o);
  }

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
