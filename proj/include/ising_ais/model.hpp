#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ising_ais {

using VertexId = std::uint32_t;

/// Undirected interior-interior edge, stored with u < v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Spin configuration on the interior vertices; every entry is -1 or +1.
struct SpinConfig {
  std::vector<std::int8_t> spins;

  std::size_t size() const { return spins.size(); }
  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
};

/// Ising model on the interior vertices, with the boundary already folded
/// into a per-vertex external field h.
///
/// Immutable after construction; the constructor enforces: no self-loops, no
/// duplicate edges, endpoints in range, one field entry per vertex, beta > 0.
class IsingGraph {
 public:
  IsingGraph(std::size_t n_interior, std::vector<Edge> edges, std::vector<double> field,
             double beta);

  std::size_t n_interior() const { return n_interior_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const double> field() const { return field_; }
  double beta() const { return beta_; }

  /// Throws StructuralError unless s has one +-1 entry per interior vertex.
  void check_spins(const SpinConfig& s) const;

  /// Same interior graph and beta, field replaced.
  IsingGraph with_field(std::vector<double> field) const;

  friend bool operator==(const IsingGraph&, const IsingGraph&) = default;

 private:
  std::size_t n_interior_;
  std::vector<Edge> edges_;
  std::vector<double> field_;
  double beta_;
};

/// Fixed +-1 boundary values and the interior-boundary edges that carry them.
struct BoundarySpec {
  struct Link {
    VertexId interior = 0;
    std::uint32_t boundary = 0;
  };

  std::vector<int> values;  // f_b, indexed by boundary vertex id
  std::vector<Link> links;
  std::vector<std::array<double, 2>> coords;  // optional, parallel to values
};

/// 2D positions of the interior vertices, parallel to vertex ids.
struct LatticeGeometry {
  std::vector<std::array<double, 2>> coords;
};

/// h_i = sum of f_b over the boundary links incident to interior vertex i.
std::vector<double> boundary_to_field(std::size_t n_interior, const BoundarySpec& spec);

/// Boundary assignment for the square lattice.
///
/// Sides: one value per side of the grid. Quadrants: the value of the
/// quadrant (I..IV, counterclockwise from +x) containing each boundary vertex,
/// measured from the grid center; vertices on an axis take the quadrant
/// counterclockwise-adjacent to them.
struct SquareBoundary {
  enum class Kind { kSides, kQuadrants };

  Kind kind = Kind::kSides;
  int left = 1;
  int right = 1;
  int top = -1;
  int bottom = -1;
  std::array<int, 4> quadrants{1, -1, 1, -1};

  static SquareBoundary sides(int left, int right, int top, int bottom);
  static SquareBoundary quadrant_signs(std::array<int, 4> signs);
};

struct Lattice {
  IsingGraph graph;
  LatticeGeometry geometry;
  BoundarySpec boundary;
};

/// n1 columns by n2 rows of interior vertices (id = row * n1 + col) with one
/// layer of boundary vertices around them.
Lattice build_square_lattice(std::size_t n1, std::size_t n2, const SquareBoundary& bc,
                             double beta);

/// Half-open angular interval [start_deg, end_deg) with a fixed boundary sign.
struct ArcCondition {
  double start_deg = 0.0;
  double end_deg = 360.0;
  int value = 1;
};

/// Random quasi-uniform Delaunay triangulation of the unit disk. Circle
/// points are boundary vertices whose sign is taken from the arc containing
/// their angle; arcs must partition [0, 360). Deterministic in `seed`.
Lattice build_disk_triangulation(double mesh_size, std::span<const ArcCondition> arcs,
                                 std::uint64_t seed, double beta);

/// Arc presets for the two disk examples.
std::vector<ArcCondition> quadrant_arcs(std::array<int, 4> signs);
std::vector<ArcCondition> sixty_degree_arcs();

struct EnergyTerms {
  std::int64_t coupling_sum = 0;  // sum over edges of s_i s_j
  double field_sum = 0.0;         // sum over vertices of h_i s_i
};

/// Unscaled energy pieces; callers multiply by beta (and the field scale).
EnergyTerms energy_terms(const IsingGraph& g, const SpinConfig& s);

/// Log of the unnormalized density at field scale theta:
/// beta * (coupling_sum + theta * field_sum).
double log_density(const IsingGraph& g, const SpinConfig& s, double theta);

std::int64_t magnetization(const SpinConfig& s);

/// Serialized form: {n_interior, edges, field, beta, coords?} in that key
/// order, so equal graphs give byte-identical text.
std::string graph_to_json(const IsingGraph& g, const LatticeGeometry* geometry = nullptr);
IsingGraph graph_from_json(const std::string& text, LatticeGeometry* geometry = nullptr);

}  // namespace ising_ais
