#include "ising_ais/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "ising_ais/errors.hpp"

namespace ising_ais {

IsingGraph::IsingGraph(std::size_t n_interior, std::vector<Edge> edges,
                       std::vector<double> field, double beta)
    : n_interior_(n_interior), edges_(std::move(edges)), field_(std::move(field)), beta_(beta) {
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
    throw StructuralError("beta must be a positive finite number");
  }
  if (field_.size() != n_interior_) {
    throw StructuralError("field has " + std::to_string(field_.size()) + " entries, expected " +
                          std::to_string(n_interior_));
  }
  for (double h : field_) {
    if (!std::isfinite(h)) throw StructuralError("field entries must be finite");
  }
  std::set<std::pair<VertexId, VertexId>> seen;
  for (Edge& e : edges_) {
    if (e.u == e.v) {
      throw StructuralError("self-loop at vertex " + std::to_string(e.u));
    }
    if (e.u >= n_interior_ || e.v >= n_interior_) {
      throw StructuralError("edge endpoint out of range");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.emplace(e.u, e.v).second) {
      throw StructuralError("duplicate edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    }
  }
}

void IsingGraph::check_spins(const SpinConfig& s) const {
  if (s.size() != n_interior_) {
    throw StructuralError("spin configuration has " + std::to_string(s.size()) +
                          " entries, graph has " + std::to_string(n_interior_));
  }
  for (auto v : s.spins) {
    if (v != 1 && v != -1) throw StructuralError("spin values must be -1 or +1");
  }
}

IsingGraph IsingGraph::with_field(std::vector<double> field) const {
  return IsingGraph(n_interior_, edges_, std::move(field), beta_);
}

std::vector<double> boundary_to_field(std::size_t n_interior, const BoundarySpec& spec) {
  for (int f : spec.values) {
    if (f != 1 && f != -1) throw StructuralError("boundary values must be -1 or +1");
  }
  std::vector<double> h(n_interior, 0.0);
  for (const auto& link : spec.links) {
    if (link.interior >= n_interior) {
      throw StructuralError("boundary link references interior vertex " +
                            std::to_string(link.interior) + " of " + std::to_string(n_interior));
    }
    if (link.boundary >= spec.values.size()) {
      throw StructuralError("boundary link references boundary vertex " +
                            std::to_string(link.boundary) + " of " +
                            std::to_string(spec.values.size()));
    }
    h[link.interior] += spec.values[link.boundary];
  }
  return h;
}

SquareBoundary SquareBoundary::sides(int left, int right, int top, int bottom) {
  SquareBoundary bc;
  bc.kind = Kind::kSides;
  bc.left = left;
  bc.right = right;
  bc.top = top;
  bc.bottom = bottom;
  return bc;
}

SquareBoundary SquareBoundary::quadrant_signs(std::array<int, 4> signs) {
  SquareBoundary bc;
  bc.kind = Kind::kQuadrants;
  bc.quadrants = signs;
  return bc;
}

namespace {

// dx, dy are doubled offsets from the grid center, so they are exact integers.
// Axis points go to the quadrant that follows them counterclockwise.
int quadrant_index(long dx, long dy) {
  if (dx > 0 && dy >= 0) return 0;
  if (dx <= 0 && dy > 0) return 1;
  if (dx < 0 && dy <= 0) return 2;
  return 3;
}

}  // namespace

Lattice build_square_lattice(std::size_t n1, std::size_t n2, const SquareBoundary& bc,
                             double beta) {
  if (n1 < 1 || n2 < 1) throw StructuralError("lattice dimensions must be at least 1");
  const std::size_t n = n1 * n2;
  auto id = [n1](std::size_t col, std::size_t row) {
    return static_cast<VertexId>(row * n1 + col);
  };

  std::vector<Edge> edges;
  edges.reserve(n1 * (n2 - 1) + n2 * (n1 - 1));
  for (std::size_t row = 0; row < n2; ++row) {
    for (std::size_t col = 0; col < n1; ++col) {
      if (col + 1 < n1) edges.push_back({id(col, row), id(col + 1, row)});
      if (row + 1 < n2) edges.push_back({id(col, row), id(col, row + 1)});
    }
  }

  LatticeGeometry geometry;
  geometry.coords.reserve(n);
  for (std::size_t row = 0; row < n2; ++row) {
    for (std::size_t col = 0; col < n1; ++col) {
      geometry.coords.push_back({static_cast<double>(col), static_cast<double>(row)});
    }
  }

  BoundarySpec boundary;
  auto add = [&](long bx, long by, VertexId neighbor, int side_value) {
    int value = side_value;
    if (bc.kind == SquareBoundary::Kind::kQuadrants) {
      const long dx = 2 * bx - static_cast<long>(n1 - 1);
      const long dy = 2 * by - static_cast<long>(n2 - 1);
      value = bc.quadrants[quadrant_index(dx, dy)];
    }
    const auto b = static_cast<std::uint32_t>(boundary.values.size());
    boundary.values.push_back(value);
    boundary.coords.push_back({static_cast<double>(bx), static_cast<double>(by)});
    boundary.links.push_back({neighbor, b});
  };
  const long w = static_cast<long>(n1);
  const long ht = static_cast<long>(n2);
  for (long row = 0; row < ht; ++row) add(-1, row, id(0, row), bc.left);
  for (long row = 0; row < ht; ++row) add(w, row, id(n1 - 1, row), bc.right);
  for (long col = 0; col < w; ++col) add(col, -1, id(col, 0), bc.bottom);
  for (long col = 0; col < w; ++col) add(col, ht, id(col, n2 - 1), bc.top);

  auto field = boundary_to_field(n, boundary);
  return Lattice{IsingGraph(n, std::move(edges), std::move(field), beta), std::move(geometry),
                 std::move(boundary)};
}

EnergyTerms energy_terms(const IsingGraph& g, const SpinConfig& s) {
  g.check_spins(s);
  EnergyTerms out;
  for (const Edge& e : g.edges()) out.coupling_sum += s.spins[e.u] * s.spins[e.v];
  const auto h = g.field();
  for (std::size_t i = 0; i < h.size(); ++i) out.field_sum += h[i] * s.spins[i];
  return out;
}

double log_density(const IsingGraph& g, const SpinConfig& s, double theta) {
  const EnergyTerms t = energy_terms(g, s);
  return g.beta() * (static_cast<double>(t.coupling_sum) + theta * t.field_sum);
}

std::int64_t magnetization(const SpinConfig& s) {
  std::int64_t m = 0;
  for (auto v : s.spins) m += v;
  return m;
}

}  // namespace ising_ais
