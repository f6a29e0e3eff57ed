#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ising_ais/model.hpp"

namespace ising_ais::app {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // verification mismatch in `report`
  kConfigError = 2,
  kSizeGuard = 3,
  kIoError = 4,
};

/// Thrown for any config problem; `field` names the offending key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ModelSpec {
  enum class Family { kSquare, kDisk, kExplicit };
  enum class Boundary { kSides, kQuadrants, kSixtyDegree, kArcs };

  Family family = Family::kSquare;
  Boundary boundary = Boundary::kSides;

  // square
  std::size_t n1 = 40;
  std::size_t n2 = 40;
  int left = 1, right = 1, top = -1, bottom = -1;
  // square and disk quadrants
  std::array<int, 4> signs{1, -1, 1, -1};
  // disk
  double mesh_size = 0.05;
  std::uint64_t mesh_seed = 0;
  std::vector<ArcCondition> arcs;
  // explicit
  std::size_t n_interior = 0;
  std::vector<Edge> edges;
  std::vector<double> field;
};

struct ExperimentConfig {
  ModelSpec model;
  double beta = 0.5;
  std::size_t levels = 400;
  std::size_t paths = 500;
  std::size_t burnin_steps = 100;
  std::size_t steps_per_level = 1;
  std::uint64_t base_seed = 0;
  std::optional<std::string> output_dir;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError.
ExperimentConfig config_from_json(const nlohmann::ordered_json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every field written out, defaults included, in a fixed key order.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

Lattice build_model(const ExperimentConfig& cfg);

struct RunOptions {
  unsigned workers = 0;
  bool history = false;
  std::optional<std::filesystem::path> output_dir;  // overrides the config
};

/// Output directory: explicit option, then the config's output_dir, then
/// $ISING_AIS_OUTPUT_ROOT (default "runs") / <config file stem>.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg,
                                         const std::filesystem::path& config_path,
                                         const RunOptions& options);

int cmd_run(const std::filesystem::path& config_path, const RunOptions& options,
            std::ostream& out, std::ostream& err);

/// Runs an already-parsed config into `dir`.
int run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                   const RunOptions& options, std::ostream& out, std::ostream& err);

struct OracleOptions {
  bool detailed_balance = false;
};

int cmd_oracle(const std::filesystem::path& config_path, const OracleOptions& options,
               std::ostream& out, std::ostream& err);

int cmd_report(const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err);

/// "%.17g".
std::string format_double(double x);

}  // namespace ising_ais::app
