#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ising_ais/ais.hpp"
#include "ising_ais/model.hpp"

namespace ising_ais {

/// Weights divided by their ensemble mean, computed with a max-log shift.
/// The result averages to 1. Throws DiagnosticsError on an empty list, on
/// NaN/+inf entries, or when every entry is -inf.
std::vector<double> normalize_weights(std::span<const double> log_weights);

/// Sample variance with the K-1 denominator; the estimator used for every
/// variance this module reports. Requires at least two values.
double unbiased_variance(std::span<const double> values);

/// Log-weight history of an ensemble: row k is path k, column l-1 is level l.
using HistoryMatrix = std::vector<std::vector<double>>;

HistoryMatrix history_matrix(std::span<const AisPath> paths);
std::vector<double> final_log_weights(std::span<const AisPath> paths);

/// Per level l, the variance over paths of log of the normalized weights.
/// Requires K >= 2 rows of equal length.
std::vector<double> variance_curve(const HistoryMatrix& history);

/// Per-level variance curve accumulated one path at a time (Welford). The
/// normalizing mean only shifts every log w~ at a level by the same amount,
/// so the variance of log w~ equals the variance of log w.
class StreamingVarianceCurve {
 public:
  explicit StreamingVarianceCurve(std::size_t levels);

  void add(std::span<const double> log_weight_history);
  std::size_t count() const { return count_; }
  std::vector<double> curve() const;

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

/// 1 / (1 + Var[w~_L]) over the final log-weights. Requires K >= 2.
double sample_efficiency(std::span<const double> final_log_weights);

/// Sweeps per effective sample under the accounting L / efficiency.
double iterations_per_effective_sample(std::size_t levels, double efficiency);

struct WeightedEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  /// At most one path carries non-negligible weight.
  bool degenerate = false;
};

enum class ErrorMethod { kDelta, kBootstrap };

struct ErrorOptions {
  ErrorMethod method = ErrorMethod::kDelta;
  std::size_t bootstrap_replicates = 1000;
  std::uint64_t bootstrap_seed = 0;
};

using Observable = std::function<double(const SpinConfig&)>;

/// Self-normalized importance estimate sum_k w_k f(s_k) / sum_k w_k.
/// Standard error by the delta method,
/// sqrt(sum_k w_k^2 (f_k - estimate)^2) / sum_k w_k, or by bootstrap over paths.
/// Requires at least two paths.
WeightedEstimate weighted_observable(std::span<const AisPath> paths, const Observable& obs,
                                     const ErrorOptions& options = {});

/// Same, from precomputed observable values and final log-weights.
WeightedEstimate weighted_estimate(std::span<const double> values,
                                   std::span<const double> log_weights,
                                   const ErrorOptions& options = {});

/// Weighted per-vertex mean spin.
std::vector<double> weighted_mean_spin(std::span<const AisPath> paths);

namespace observables {

/// M(s) = sum_i s_i.
double magnetization(const SpinConfig& s);

/// Which of the two dominant profiles a configuration sits in: 1 if M > 0,
/// 0 if M < 0, and 1/2 on a tie, so the indicator is exactly antisymmetric
/// about 1/2 under a global flip.
double positive_profile(const SpinConfig& s);

}  // namespace observables

}  // namespace ising_ais
