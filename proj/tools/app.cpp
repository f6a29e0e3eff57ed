#include "app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ising_ais/ais.hpp"
#include "ising_ais/diagnostics.hpp"
#include "ising_ais/errors.hpp"
#include "ising_ais/oracle.hpp"

namespace ising_ais::app {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads keys from one JSON object and rejects any key nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const ordered_json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  const ordered_json& at(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(field(key), "required key missing");
    return j_.at(key);
  }

  std::string string(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    return v.get<std::string>();
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (fallback && !has(key)) return *fallback;
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    return v.get<double>();
  }

  std::uint64_t count(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) {
    if (fallback && !has(key)) return *fallback;
    return as_count(at(key), field(key));
  }

  int sign(const std::string& key) { return as_sign(at(key), field(key)); }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.contains(it.key())) throw ConfigError(field(it.key()), "unknown key");
    }
  }

  static std::uint64_t as_count(const ordered_json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError(where, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  static int as_sign(const ordered_json& v, const std::string& where) {
    if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1)) {
      throw ConfigError(where, "expected -1 or +1");
    }
    return v.get<int>();
  }

 private:
  const ordered_json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::array<int, 4> read_signs(ObjectReader& r) {
  const auto& v = r.at("signs");
  if (!v.is_array() || v.size() != 4) {
    throw ConfigError(r.field("signs"), "expected an array of four signs (quadrants I..IV)");
  }
  std::array<int, 4> s{};
  for (std::size_t q = 0; q < 4; ++q) {
    s[q] = ObjectReader::as_sign(v[q], r.field("signs") + "[" + std::to_string(q) + "]");
  }
  return s;
}

ModelSpec parse_model(const ordered_json& j) {
  ObjectReader r(j, "model");
  ModelSpec m;
  const std::string family = r.string("family");
  if (family == "square") {
    m.family = ModelSpec::Family::kSquare;
    m.n1 = r.count("n1");
    m.n2 = r.count("n2");
    if (m.n1 < 1) throw ConfigError("model.n1", "must be at least 1");
    if (m.n2 < 1) throw ConfigError("model.n2", "must be at least 1");
    ObjectReader b(r.at("boundary"), "model.boundary");
    const std::string type = b.string("type");
    if (type == "sides") {
      m.boundary = ModelSpec::Boundary::kSides;
      m.left = b.sign("left");
      m.right = b.sign("right");
      m.top = b.sign("top");
      m.bottom = b.sign("bottom");
    } else if (type == "quadrants") {
      m.boundary = ModelSpec::Boundary::kQuadrants;
      m.signs = read_signs(b);
    } else {
      throw ConfigError("model.boundary.type", "square lattices take \"sides\" or \"quadrants\"");
    }
    b.finish();
  } else if (family == "disk") {
    m.family = ModelSpec::Family::kDisk;
    m.mesh_size = r.number("mesh_size");
    if (!(m.mesh_size > 0.0 && m.mesh_size < 1.0)) {
      throw ConfigError("model.mesh_size", "must lie in (0, 1)");
    }
    m.mesh_seed = r.count("seed", 0);
    ObjectReader b(r.at("boundary"), "model.boundary");
    const std::string type = b.string("type");
    if (type == "quadrants") {
      m.boundary = ModelSpec::Boundary::kQuadrants;
      m.signs = read_signs(b);
    } else if (type == "sixty_degree") {
      m.boundary = ModelSpec::Boundary::kSixtyDegree;
    } else if (type == "arcs") {
      m.boundary = ModelSpec::Boundary::kArcs;
      const auto& arcs = b.at("arcs");
      if (!arcs.is_array() || arcs.empty()) {
        throw ConfigError("model.boundary.arcs", "expected a non-empty array");
      }
      for (std::size_t k = 0; k < arcs.size(); ++k) {
        ObjectReader a(arcs[k], "model.boundary.arcs[" + std::to_string(k) + "]");
        m.arcs.push_back({a.number("start_deg"), a.number("end_deg"), a.sign("value")});
        a.finish();
      }
    } else {
      throw ConfigError("model.boundary.type",
                        "disk models take \"quadrants\", \"sixty_degree\" or \"arcs\"");
    }
    b.finish();
  } else if (family == "explicit") {
    m.family = ModelSpec::Family::kExplicit;
    m.n_interior = r.count("n_interior");
    const auto& edges = r.at("edges");
    if (!edges.is_array()) throw ConfigError("model.edges", "expected an array of [i, j] pairs");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const std::string where = "model.edges[" + std::to_string(k) + "]";
      if (!edges[k].is_array() || edges[k].size() != 2) {
        throw ConfigError(where, "expected an [i, j] pair");
      }
      m.edges.push_back({static_cast<VertexId>(ObjectReader::as_count(edges[k][0], where)),
                         static_cast<VertexId>(ObjectReader::as_count(edges[k][1], where))});
    }
    const auto& field = r.at("field");
    if (!field.is_array()) throw ConfigError("model.field", "expected an array of numbers");
    for (const auto& h : field) {
      if (!h.is_number()) throw ConfigError("model.field", "expected an array of numbers");
      m.field.push_back(h.get<double>());
    }
  } else {
    throw ConfigError("model.family", "unknown lattice family \"" + family +
                                          "\" (expected square, disk or explicit)");
  }
  r.finish();
  return m;
}

ordered_json model_to_json(const ModelSpec& m) {
  ordered_json j;
  auto signs = [&] { return ordered_json(std::vector<int>(m.signs.begin(), m.signs.end())); };
  switch (m.family) {
    case ModelSpec::Family::kSquare: {
      j["family"] = "square";
      j["n1"] = m.n1;
      j["n2"] = m.n2;
      ordered_json b;
      if (m.boundary == ModelSpec::Boundary::kSides) {
        b["type"] = "sides";
        b["left"] = m.left;
        b["right"] = m.right;
        b["top"] = m.top;
        b["bottom"] = m.bottom;
      } else {
        b["type"] = "quadrants";
        b["signs"] = signs();
      }
      j["boundary"] = b;
      break;
    }
    case ModelSpec::Family::kDisk: {
      j["family"] = "disk";
      j["mesh_size"] = m.mesh_size;
      j["seed"] = m.mesh_seed;
      ordered_json b;
      if (m.boundary == ModelSpec::Boundary::kQuadrants) {
        b["type"] = "quadrants";
        b["signs"] = signs();
      } else if (m.boundary == ModelSpec::Boundary::kSixtyDegree) {
        b["type"] = "sixty_degree";
      } else {
        b["type"] = "arcs";
        auto arcs = ordered_json::array();
        for (const auto& a : m.arcs) {
          ordered_json aj;
          aj["start_deg"] = a.start_deg;
          aj["end_deg"] = a.end_deg;
          aj["value"] = a.value;
          arcs.push_back(aj);
        }
        b["arcs"] = arcs;
      }
      j["boundary"] = b;
      break;
    }
    case ModelSpec::Family::kExplicit: {
      j["family"] = "explicit";
      j["n_interior"] = m.n_interior;
      auto edges = ordered_json::array();
      for (const auto& e : m.edges) edges.push_back({e.u, e.v});
      j["edges"] = edges;
      j["field"] = m.field;
      break;
    }
  }
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Splits CSV text into rows of fields; the header row is checked and dropped.
std::vector<std::vector<std::string>> read_csv(const fs::path& path,
                                               const std::string& expected_header) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != expected_header) {
    throw IoError(path.filename().string() + ": unexpected header");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) fields.push_back(cell);
    rows.push_back(std::move(fields));
  }
  return rows;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError(where + ": not a number: " + s);
  return v;
}

std::vector<double> read_weights(const fs::path& dir) {
  const auto rows = read_csv(dir / "weights.csv", "path_id,log_weight");
  std::vector<double> w;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != 2 || rows[k][0] != std::to_string(k)) {
      throw IoError("weights.csv: malformed row " + std::to_string(k + 1));
    }
    w.push_back(parse_double(rows[k][1], "weights.csv"));
  }
  return w;
}

ordered_json estimate_json(const WeightedEstimate& e) {
  ordered_json j;
  j["estimate"] = e.estimate;
  j["standard_error"] = e.standard_error;
  return j;
}

bool close(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ExperimentConfig config_from_json(const ordered_json& j) {
  ObjectReader r(j, "");
  ExperimentConfig c;
  c.model = parse_model(r.at("model"));
  c.beta = r.number("beta");
  if (!(c.beta > 0.0) || !std::isfinite(c.beta)) throw ConfigError("beta", "must be positive");
  c.levels = r.count("levels", c.levels);
  c.paths = r.count("paths", c.paths);
  c.burnin_steps = r.count("burnin_steps", c.burnin_steps);
  c.steps_per_level = r.count("steps_per_level", c.steps_per_level);
  c.base_seed = r.count("base_seed", c.base_seed);
  if (c.levels < 1) throw ConfigError("levels", "must be at least 1");
  if (c.paths < 1) throw ConfigError("paths", "must be at least 1");
  if (c.steps_per_level < 1) throw ConfigError("steps_per_level", "must be at least 1");
  if (r.has("output_dir")) c.output_dir = r.string("output_dir");
  r.finish();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  const std::string text = read_text(path);
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["model"] = model_to_json(c.model);
  j["beta"] = c.beta;
  j["levels"] = c.levels;
  j["paths"] = c.paths;
  j["burnin_steps"] = c.burnin_steps;
  j["steps_per_level"] = c.steps_per_level;
  j["base_seed"] = c.base_seed;
  if (c.output_dir) j["output_dir"] = *c.output_dir;
  return j;
}

Lattice build_model(const ExperimentConfig& c) {
  const ModelSpec& m = c.model;
  switch (m.family) {
    case ModelSpec::Family::kSquare: {
      const auto bc = m.boundary == ModelSpec::Boundary::kSides
                          ? SquareBoundary::sides(m.left, m.right, m.top, m.bottom)
                          : SquareBoundary::quadrant_signs(m.signs);
      return build_square_lattice(m.n1, m.n2, bc, c.beta);
    }
    case ModelSpec::Family::kDisk: {
      std::vector<ArcCondition> arcs;
      if (m.boundary == ModelSpec::Boundary::kQuadrants) {
        arcs = quadrant_arcs(m.signs);
      } else if (m.boundary == ModelSpec::Boundary::kSixtyDegree) {
        arcs = sixty_degree_arcs();
      } else {
        arcs = m.arcs;
      }
      return build_disk_triangulation(m.mesh_size, arcs, m.mesh_seed, c.beta);
    }
    case ModelSpec::Family::kExplicit:
      return Lattice{IsingGraph(m.n_interior, m.edges, m.field, c.beta), {}, {}};
  }
  throw ConfigError("model.family", "unsupported");
}

fs::path resolve_output_dir(const ExperimentConfig& cfg, const fs::path& config_path,
                            const RunOptions& options) {
  if (options.output_dir) return *options.output_dir;
  if (cfg.output_dir) return *cfg.output_dir;
  const char* root = std::getenv("ISING_AIS_OUTPUT_ROOT");
  return fs::path(root != nullptr && *root != '\0' ? root : "runs") / config_path.stem();
}

int run_experiment(const ExperimentConfig& cfg, const fs::path& dir, const RunOptions& options,
                   std::ostream& out, std::ostream& err) {
  Lattice lattice = [&] {
    try {
      return build_model(cfg);
    } catch (const StructuralError& e) {
      throw ConfigError("model", e.what());
    } catch (const BuildError& e) {
      throw ConfigError("model", e.what());
    }
  }();
  const IsingGraph& g = lattice.graph;

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    err << "error: cannot create output directory " << dir.string() << "\n";
    return kIoError;
  }

  AisConfig ais;
  ais.num_paths = cfg.paths;
  ais.burnin_steps = cfg.burnin_steps;
  ais.steps_per_level = cfg.steps_per_level;
  ais.schedule = Schedule::equally_spaced(cfg.levels);
  ais.base_seed = cfg.base_seed;

  write_text(dir / "graph.json", graph_to_json(g, &lattice.geometry) + "\n");
  const auto paths = run_ensemble(g, ais, options.workers);
  const auto final_w = final_log_weights(paths);

  std::string weights = "path_id,log_weight\n";
  for (std::size_t k = 0; k < final_w.size(); ++k) {
    weights += std::to_string(k) + "," + format_double(final_w[k]) + "\n";
  }
  write_text(dir / "weights.csv", weights);

  if (options.history) {
    std::string h = "path_id";
    for (std::size_t l = 1; l <= cfg.levels; ++l) h += ",l" + std::to_string(l);
    h += "\n";
    for (std::size_t k = 0; k < paths.size(); ++k) {
      h += std::to_string(k);
      for (double v : paths[k].log_weight_history) h += "," + format_double(v);
      h += "\n";
    }
    write_text(dir / "history.csv", h);
  }

  ordered_json report;
  report["config"] = config_to_json(cfg);
  report["K"] = cfg.paths;
  report["L"] = cfg.levels;
  report["n_interior"] = g.n_interior();
  report["n_edges"] = g.edges().size();
  const bool diagnostics = paths.size() >= 2;
  report["diagnostics_available"] = diagnostics;
  if (diagnostics) {
    const double efficiency = sample_efficiency(final_w);
    const auto curve = variance_curve(history_matrix(paths));
    std::string vc = "level,theta,var_log_w_normalized\n";
    for (std::size_t l = 1; l <= cfg.levels; ++l) {
      vc += std::to_string(l) + "," + format_double(ais.schedule.theta(l)) + "," +
            format_double(curve[l - 1]) + "\n";
    }
    write_text(dir / "variance_curve.csv", vc);

    const auto mean_spin = weighted_mean_spin(paths);
    std::string ms = "vertex,x,y,mean_spin\n";
    for (std::size_t i = 0; i < mean_spin.size(); ++i) {
      const bool has_xy = i < lattice.geometry.coords.size();
      ms += std::to_string(i) + "," +
            (has_xy ? format_double(lattice.geometry.coords[i][0]) : std::string()) + "," +
            (has_xy ? format_double(lattice.geometry.coords[i][1]) : std::string()) + "," +
            format_double(mean_spin[i]) + "\n";
    }
    write_text(dir / "mean_spin.csv", ms);

    const auto mag = weighted_observable(paths, observables::magnetization);
    const auto prof = weighted_observable(paths, observables::positive_profile);
    report["efficiency"] = efficiency;
    report["iterations_per_effective_sample"] =
        iterations_per_effective_sample(cfg.levels, efficiency);
    report["final_variance_log_w"] = curve.back();
    ordered_json obs;
    obs["magnetization"] = estimate_json(mag);
    obs["positive_profile"] = estimate_json(prof);
    obs["degenerate"] = mag.degenerate;
    report["observables"] = obs;
    out << "efficiency " << format_double(efficiency) << "\n"
        << "sw_iterations_per_effective_sample "
        << format_double(iterations_per_effective_sample(cfg.levels, efficiency)) << "\n";
  } else {
    report["efficiency"] = nullptr;
    report["iterations_per_effective_sample"] = nullptr;
    report["final_variance_log_w"] = nullptr;
    report["observables"] = nullptr;
    out << "diagnostics unavailable: need at least 2 paths\n";
  }
  write_text(dir / "report.json", report.dump(2) + "\n");
  out << "artifacts written to " << dir.string() << "\n";
  return kOk;
}

int cmd_run(const fs::path& config_path, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
  try {
    const ExperimentConfig cfg = load_config(config_path);
    return run_experiment(cfg, resolve_output_dir(cfg, config_path, options), options, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
}

int cmd_oracle(const fs::path& config_path, const OracleOptions& options, std::ostream& out,
               std::ostream& err) {
  try {
    const ExperimentConfig cfg = load_config(config_path);
    Lattice lattice = [&] {
      try {
        return build_model(cfg);
      } catch (const StructuralError& e) {
        throw ConfigError("model", e.what());
      } catch (const BuildError& e) {
        throw ConfigError("model", e.what());
      }
    }();
    const IsingGraph& g = lattice.graph;
    const auto p0 = oracle::enumerate_pV(g, 0.0);
    const auto p1 = oracle::enumerate_pV(g, 1.0);

    ordered_json j;
    j["n_interior"] = g.n_interior();
    j["n_edges"] = g.edges().size();
    j["beta"] = g.beta();
    j["log_z_theta0"] = p0.log_z;
    j["log_z_theta1"] = p1.log_z;
    j["z_ratio"] = std::exp(p1.log_z - p0.log_z);

    double mag = 0.0, prof = 0.0;
    std::vector<double> mean_spin(g.n_interior(), 0.0);
    for (std::uint64_t s = 0; s < p1.prob.size(); ++s) {
      const auto spins = oracle::spins_from_mask(s, g.n_interior());
      mag += p1.prob[s] * observables::magnetization(spins);
      prof += p1.prob[s] * observables::positive_profile(spins);
      for (std::size_t i = 0; i < mean_spin.size(); ++i) mean_spin[i] += p1.prob[s] * spins.spins[i];
    }
    ordered_json e;
    e["magnetization"] = mag;
    e["positive_profile"] = prof;
    e["mean_spin"] = mean_spin;
    j["expectations"] = e;

    if (options.detailed_balance) {
      ordered_json db = ordered_json::array();
      for (double scale : {0.0, 0.5, 1.0}) {
        const auto pv = oracle::enumerate_pV(g, scale);
        const auto m = oracle::exact_sw_transition(g, scale);
        ordered_json row;
        row["field_scale"] = scale;
        row["detailed_balance_residual"] = oracle::detailed_balance_residual(pv, m);
        row["stationarity_residual"] = oracle::stationarity_residual(pv, m);
        db.push_back(row);
      }
      j["detailed_balance"] = db;
    }
    out << j.dump(2) << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SizeGuardError& e) {
    err << "size guard: " << e.what() << "\n";
    return kSizeGuard;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
}

int cmd_report(const fs::path& dir, std::ostream& out, std::ostream& err) {
  try {
    if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
    ordered_json report;
    try {
      report = ordered_json::parse(read_text(dir / "report.json"));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("report.json is corrupt: ") + e.what());
    }
    const auto weights = read_weights(dir);

    std::size_t K = 0, L = 0;
    bool diagnostics = false;
    try {
      K = report.at("K").get<std::size_t>();
      L = report.at("L").get<std::size_t>();
      diagnostics = report.at("diagnostics_available").get<bool>();
      (void)config_from_json(report.at("config"));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("report.json is missing fields: ") + e.what());
    } catch (const ConfigError& e) {
      throw IoError(std::string("report.json has an invalid config: ") + e.what());
    }

    std::vector<std::string> mismatches;
    if (weights.size() != K) {
      mismatches.push_back("weights.csv has " + std::to_string(weights.size()) +
                           " rows, report says K=" + std::to_string(K));
    }

    out << "K " << K << "\nL " << L << "\n";
    if (!diagnostics) {
      out << "diagnostics unavailable: need at least 2 paths\n";
    } else if (mismatches.empty()) {
      const double eff = sample_efficiency(weights);
      const double reported = report.at("efficiency").get<double>();
      if (!close(eff, reported, 1e-9)) {
        mismatches.push_back("efficiency recomputed from weights.csv is " + format_double(eff) +
                             ", report.json says " + format_double(reported));
      }
      out << "efficiency " << format_double(eff) << "\n"
          << "sw_iterations_per_effective_sample "
          << format_double(iterations_per_effective_sample(L, eff)) << "\n";

      const auto curve_rows = read_csv(dir / "variance_curve.csv", "level,theta,var_log_w_normalized");
      if (curve_rows.size() != L) mismatches.push_back("variance_curve.csv row count != L");
      std::vector<double> curve;
      for (const auto& row : curve_rows) {
        if (row.size() != 3) throw IoError("variance_curve.csv: malformed row");
        curve.push_back(parse_double(row[2], "variance_curve.csv"));
      }
      if (fs::exists(dir / "history.csv")) {
        std::string header = "path_id";
        for (std::size_t l = 1; l <= L; ++l) header += ",l" + std::to_string(l);
        const auto rows = read_csv(dir / "history.csv", header);
        HistoryMatrix history;
        for (const auto& row : rows) {
          if (row.size() != L + 1) throw IoError("history.csv: malformed row");
          std::vector<double> h;
          for (std::size_t l = 1; l <= L; ++l) h.push_back(parse_double(row[l], "history.csv"));
          history.push_back(std::move(h));
        }
        if (history.size() != K) {
          mismatches.push_back("history.csv row count != K");
        } else {
          const auto recomputed = variance_curve(history);
          for (std::size_t l = 0; l < std::min(L, curve.size()); ++l) {
            if (!close(recomputed[l], curve[l], 1e-9)) {
              mismatches.push_back("variance curve differs from history.csv at level " +
                                   std::to_string(l + 1));
              break;
            }
          }
          for (std::size_t k = 0; k < K; ++k) {
            if (history[k].back() != weights[k]) {
              mismatches.push_back("history.csv final column differs from weights.csv at path " +
                                   std::to_string(k));
              break;
            }
          }
        }
      }
      out << "\nlevel\ttheta\tvar_log_w_normalized\n";
      for (const auto& row : curve_rows) out << row[0] << "\t" << row[1] << "\t" << row[2] << "\n";
    }

    if (!mismatches.empty()) {
      for (const auto& m : mismatches) err << "mismatch: " << m << "\n";
      return kFailure;
    }
    out << "verified: artifacts consistent with report.json\n";
    return kOk;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const DiagnosticsError& e) {
    err << "corrupt artifacts: " << e.what() << "\n";
    return kIoError;
  }
}

}  // namespace ising_ais::app
