#include "ising_ais/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ising_ais/errors.hpp"
#include "ising_ais/rng.hpp"

namespace ising_ais {

std::vector<double> normalize_weights(std::span<const double> log_weights) {
  if (log_weights.empty()) throw DiagnosticsError("cannot normalize an empty weight list");
  double max_log = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) {
    if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity()) {
      throw DiagnosticsError("log-weights must be finite or -inf");
    }
    max_log = std::max(max_log, lw);
  }
  if (!std::isfinite(max_log)) throw DiagnosticsError("no finite weight to normalize by");

  std::vector<double> w(log_weights.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::exp(log_weights[k] - max_log);
    sum += w[k];
  }
  const double mean = sum / static_cast<double>(w.size());
  for (double& x : w) x /= mean;
  return w;
}

double unbiased_variance(std::span<const double> values) {
  if (values.size() < 2) throw DiagnosticsError("variance needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

HistoryMatrix history_matrix(std::span<const AisPath> paths) {
  HistoryMatrix m;
  m.reserve(paths.size());
  for (const auto& p : paths) m.push_back(p.log_weight_history);
  return m;
}

std::vector<double> final_log_weights(std::span<const AisPath> paths) {
  std::vector<double> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(p.log_weight());
  return out;
}

std::vector<double> variance_curve(const HistoryMatrix& history) {
  if (history.size() < 2) throw DiagnosticsError("variance curve needs at least two paths");
  const std::size_t levels = history.front().size();
  for (const auto& row : history) {
    if (row.size() != levels) throw DiagnosticsError("history rows differ in length");
  }
  std::vector<double> curve(levels);
  std::vector<double> column(history.size());
  for (std::size_t l = 0; l < levels; ++l) {
    for (std::size_t k = 0; k < history.size(); ++k) column[k] = history[k][l];
    const auto w = normalize_weights(column);
    for (std::size_t k = 0; k < w.size(); ++k) column[k] = std::log(w[k]);
    curve[l] = unbiased_variance(column);
  }
  return curve;
}

StreamingVarianceCurve::StreamingVarianceCurve(std::size_t levels)
    : mean_(levels, 0.0), m2_(levels, 0.0) {}

void StreamingVarianceCurve::add(std::span<const double> log_weight_history) {
  if (log_weight_history.size() != mean_.size()) {
    throw DiagnosticsError("history length does not match the accumulator");
  }
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t l = 0; l < mean_.size(); ++l) {
    const double delta = log_weight_history[l] - mean_[l];
    mean_[l] += delta / n;
    m2_[l] += delta * (log_weight_history[l] - mean_[l]);
  }
}

std::vector<double> StreamingVarianceCurve::curve() const {
  if (count_ < 2) throw DiagnosticsError("variance curve needs at least two paths");
  std::vector<double> out(m2_.size());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = m2_[l] / static_cast<double>(count_ - 1);
  return out;
}

double sample_efficiency(std::span<const double> final_log_weights) {
  if (final_log_weights.size() < 2) {
    throw DiagnosticsError("sample efficiency needs at least two paths");
  }
  const auto w = normalize_weights(final_log_weights);
  return 1.0 / (1.0 + unbiased_variance(w));
}

double iterations_per_effective_sample(std::size_t levels, double efficiency) {
  return static_cast<double>(levels) / efficiency;
}

namespace {

WeightedEstimate delta_estimate(std::span<const double> values, std::span<const double> w) {
  double sw = 0.0, swf = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    sw += w[k];
    swf += w[k] * values[k];
  }
  WeightedEstimate out;
  out.estimate = swf / sw;
  double s2 = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double d = values[k] - out.estimate;
    s2 += w[k] * w[k] * d * d;
  }
  out.standard_error = std::sqrt(s2) / sw;
  return out;
}

}  // namespace

WeightedEstimate weighted_estimate(std::span<const double> values,
                                   std::span<const double> log_weights,
                                   const ErrorOptions& options) {
  if (values.size() != log_weights.size()) {
    throw DiagnosticsError("values and weights differ in length");
  }
  if (values.size() < 2) throw DiagnosticsError("weighted estimate needs at least two paths");
  const auto w = normalize_weights(log_weights);

  WeightedEstimate out = delta_estimate(values, w);
  // Relative to the largest weight, anything below machine epsilon cannot
  // move the estimate.
  const double w_max = *std::max_element(w.begin(), w.end());
  const auto carrying = std::count_if(w.begin(), w.end(), [&](double x) {
    return x > w_max * std::numeric_limits<double>::epsilon();
  });
  out.degenerate = carrying <= 1;

  if (options.method == ErrorMethod::kBootstrap) {
    Rng rng(options.bootstrap_seed, 0xb007);
    const std::size_t k_paths = w.size();
    std::vector<double> bw(k_paths), bv(k_paths), estimates;
    estimates.reserve(options.bootstrap_replicates);
    for (std::size_t r = 0; r < options.bootstrap_replicates; ++r) {
      for (std::size_t k = 0; k < k_paths; ++k) {
        const auto j = rng.below(k_paths);
        bw[k] = w[j];
        bv[k] = values[j];
      }
      estimates.push_back(delta_estimate(bv, bw).estimate);
    }
    out.standard_error =
        estimates.size() >= 2 ? std::sqrt(unbiased_variance(estimates)) : 0.0;
  }
  return out;
}

WeightedEstimate weighted_observable(std::span<const AisPath> paths, const Observable& obs,
                                     const ErrorOptions& options) {
  std::vector<double> values;
  values.reserve(paths.size());
  for (const auto& p : paths) values.push_back(obs(p.final_spins));
  return weighted_estimate(values, final_log_weights(paths), options);
}

std::vector<double> weighted_mean_spin(std::span<const AisPath> paths) {
  if (paths.empty()) return {};
  const auto w = normalize_weights(final_log_weights(paths));
  std::vector<double> mean(paths.front().final_spins.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    total += w[k];
    const auto& s = paths[k].final_spins.spins;
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += w[k] * s[i];
  }
  for (double& m : mean) m /= total;
  return mean;
}

namespace observables {

double magnetization(const SpinConfig& s) {
  return static_cast<double>(ising_ais::magnetization(s));
}

double positive_profile(const SpinConfig& s) {
  const auto m = ising_ais::magnetization(s);
  return m > 0 ? 1.0 : (m < 0 ? 0.0 : 0.5);
}

}  // namespace observables

}  // namespace ising_ais
