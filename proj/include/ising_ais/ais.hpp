#pragma once

#include <cstdint>
#include <vector>

#include "ising_ais/model.hpp"
#include "ising_ais/rng.hpp"

namespace ising_ais {

/// Field-activation levels theta_0 = 0 <= ... <= theta_L = 1.
class Schedule {
 public:
  /// Throws StructuralError unless the sequence starts at 0, ends at 1, is
  /// non-decreasing and has at least two entries.
  explicit Schedule(std::vector<double> thetas);

  /// theta_l = l / levels, l = 0..levels.
  static Schedule equally_spaced(std::size_t levels);

  std::size_t levels() const { return thetas_.size() - 1; }
  double theta(std::size_t l) const { return thetas_[l]; }
  const std::vector<double>& thetas() const { return thetas_; }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<double> thetas_;
};

struct AisConfig {
  std::size_t num_paths = 500;
  std::size_t burnin_steps = 100;
  std::size_t steps_per_level = 1;
  Schedule schedule = Schedule::equally_spaced(400);
  std::uint64_t base_seed = 0;

  void validate() const;
};

struct AisPath {
  SpinConfig final_spins;
  /// Entry l-1 is log w_l, the cumulative log-weight through level l.
  std::vector<double> log_weight_history;

  double log_weight() const { return log_weight_history.back(); }
};

/// beta * (theta_next - theta_prev) * sum_i h_i s_i: the log ratio of the
/// unnormalized densities at the two levels. Coupling terms cancel.
double log_weight_increment(const IsingGraph& g, const SpinConfig& s, double theta_prev,
                            double theta_next);

/// Random stream for path `path_index` of an ensemble seeded by `base_seed`.
Rng path_rng(std::uint64_t base_seed, std::uint64_t path_index);

/// One annealing path.
///
/// Starts from fair-coin spins, runs burnin_steps SW sweeps at zero field,
/// then for l = 1..L adds the level-l increment at the current configuration
/// and, for l < L, runs steps_per_level sweeps at field scale theta_l. So L
/// weight factors and L-1 transition blocks, as in the standard AIS loop.
AisPath run_path(const IsingGraph& g, const AisConfig& cfg, std::uint64_t path_index);

/// cfg.num_paths independent paths, path k seeded by (base_seed, k).
/// `workers` = 0 uses the hardware concurrency. Output does not depend on
/// the worker count.
std::vector<AisPath> run_ensemble(const IsingGraph& g, const AisConfig& cfg,
                                  unsigned workers = 0);

}  // namespace ising_ais
