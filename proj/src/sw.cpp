#include "ising_ais/sw.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ising_ais/errors.hpp"

namespace ising_ais {

namespace {

constexpr std::uint32_t kUnlabeled = std::numeric_limits<std::uint32_t>::max();

// Disjoint-set forest with path halving and union by size.
struct UnionFind {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> size;

  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

double bond_probability(double beta) { return -std::expm1(-2.0 * beta); }

double cluster_up_probability(double beta, double field_sum) {
  // Logistic of 2 beta h, written to avoid overflow for large |h|.
  const double x = 2.0 * beta * field_sum;
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

EdgeConfig activate_edges(const IsingGraph& g, const SpinConfig& s, Rng& rng) {
  g.check_spins(s);
  const double p = bond_probability(g.beta());
  const auto edges = g.edges();
  EdgeConfig w{std::vector<std::uint8_t>(edges.size(), 0)};
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (s.spins[edges[k].u] == s.spins[edges[k].v]) w.active[k] = rng.bernoulli(p) ? 1 : 0;
  }
  return w;
}

ClusterPartition connected_components(const IsingGraph& g, const EdgeConfig& w,
                                      double field_scale) {
  const auto edges = g.edges();
  if (w.active.size() != edges.size()) {
    throw StructuralError("edge configuration length does not match edge count");
  }
  const std::size_t n = g.n_interior();
  UnionFind uf(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (w.active[k]) uf.unite(edges[k].u, edges[k].v);
  }

  ClusterPartition p;
  p.component.assign(n, 0);
  std::vector<std::uint32_t> label(n, kUnlabeled);
  const auto h = g.field();
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto root = uf.find(i);
    if (label[root] == kUnlabeled) {
      label[root] = static_cast<std::uint32_t>(p.field_sum.size());
      p.field_sum.push_back(0.0);
    }
    p.component[i] = label[root];
    p.field_sum[label[root]] += field_scale * h[i];
  }
  return p;
}

SpinConfig assign_clusters(const ClusterPartition& p, double beta, Rng& rng) {
  std::vector<std::int8_t> cluster_spin(p.count());
  for (std::size_t c = 0; c < p.count(); ++c) {
    cluster_spin[c] = rng.bernoulli(cluster_up_probability(beta, p.field_sum[c])) ? 1 : -1;
  }
  SpinConfig s{std::vector<std::int8_t>(p.component.size())};
  for (std::size_t i = 0; i < p.component.size(); ++i) {
    s.spins[i] = cluster_spin[p.component[i]];
  }
  return s;
}

SwKernel::SwKernel(const IsingGraph& g)
    : graph_(&g),
      bond_threshold_(Rng::threshold(bond_probability(g.beta()))),
      parent_(g.n_interior()),
      size_(g.n_interior()),
      label_(g.n_interior()) {
  cluster_field_.reserve(g.n_interior());
  cluster_spin_.reserve(g.n_interior());
}

std::uint32_t SwKernel::find(std::uint32_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void SwKernel::unite(std::uint32_t a, std::uint32_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
}

void SwKernel::step(SpinConfig& s, double field_scale, Rng& rng) {
  const std::size_t n = graph_->n_interior();
  if (s.size() != n) throw StructuralError("spin configuration does not match graph");
  std::iota(parent_.begin(), parent_.end(), 0u);
  std::fill(size_.begin(), size_.end(), 1u);

  auto& spins = s.spins;
  for (const Edge& e : graph_->edges()) {
    if (spins[e.u] == spins[e.v] && rng.bits() < bond_threshold_) unite(e.u, e.v);
  }

  const auto h = graph_->field();
  std::fill(label_.begin(), label_.end(), kUnlabeled);
  cluster_field_.clear();
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (label_[root] == kUnlabeled) {
      label_[root] = static_cast<std::uint32_t>(cluster_field_.size());
      cluster_field_.push_back(0.0);
    }
    // After this pass parent_[i] is the root of i.
    parent_[i] = root;
    cluster_field_[label_[root]] += field_scale * h[i];
  }

  const double beta = graph_->beta();
  cluster_spin_.resize(cluster_field_.size());
  for (std::size_t c = 0; c < cluster_field_.size(); ++c) {
    cluster_spin_[c] = rng.uniform() < cluster_up_probability(beta, cluster_field_[c]) ? 1 : -1;
  }
  for (std::uint32_t i = 0; i < n; ++i) spins[i] = cluster_spin_[label_[parent_[i]]];
}

SpinConfig sw_step(const IsingGraph& g, double field_scale, const SpinConfig& s, Rng& rng) {
  g.check_spins(s);
  SwKernel kernel(g);
  SpinConfig t = s;
  kernel.step(t, field_scale, rng);
  return t;
}

}  // namespace ising_ais
