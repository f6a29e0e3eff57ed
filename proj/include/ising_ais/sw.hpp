#pragma once

#include <cstdint>
#include <vector>

#include "ising_ais/model.hpp"
#include "ising_ais/rng.hpp"

namespace ising_ais {

/// Bond indicators, parallel to IsingGraph::edges().
struct EdgeConfig {
  std::vector<std::uint8_t> active;

  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;
};

/// Connected components of the active-bond subgraph.
struct ClusterPartition {
  std::vector<std::uint32_t> component;  // contiguous ids 0..count-1, by first vertex
  std::vector<double> field_sum;         // h_gamma per component (already scaled)

  std::size_t count() const { return field_sum.size(); }
};

/// Probability that an aligned edge is bonded: 1 - exp(-2 beta).
double bond_probability(double beta);

/// Probability that a cluster with field sum h is assigned +1:
/// e^{beta h} / (e^{beta h} + e^{-beta h}).
double cluster_up_probability(double beta, double field_sum);

/// Anti-aligned edges are never bonded; aligned edges independently with
/// bond_probability(beta). Draws one uniform per aligned edge, in edge order.
EdgeConfig activate_edges(const IsingGraph& g, const SpinConfig& s, Rng& rng);

/// Union-find over the active edges; component field sums use h scaled by
/// field_scale.
ClusterPartition connected_components(const IsingGraph& g, const EdgeConfig& w,
                                      double field_scale = 1.0);

/// Draws one spin per component (in component-id order) and spreads it to
/// the component's vertices.
SpinConfig assign_clusters(const ClusterPartition& p, double beta, Rng& rng);

/// Reusable Swendsen-Wang sweep for one graph.
///
/// Holds the union-find scratch so repeated sweeps do not allocate. One
/// kernel per worker; the graph itself is shared read-only. The random draws
/// match activate_edges -> connected_components -> assign_clusters exactly.
class SwKernel {
 public:
  explicit SwKernel(const IsingGraph& g);

  /// One SW iteration at field scale theta, in place.
  void step(SpinConfig& s, double field_scale, Rng& rng);

  const IsingGraph& graph() const { return *graph_; }

 private:
  std::uint32_t find(std::uint32_t x);
  void unite(std::uint32_t a, std::uint32_t b);

  const IsingGraph* graph_;
  std::uint64_t bond_threshold_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> label_;
  std::vector<double> cluster_field_;
  std::vector<std::int8_t> cluster_spin_;
};

/// Convenience wrapper: one SW iteration returning a new configuration.
SpinConfig sw_step(const IsingGraph& g, double field_scale, const SpinConfig& s, Rng& rng);

}  // namespace ising_ais
