#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "delaunay.hpp"
#include "ising_ais/errors.hpp"
#include "ising_ais/model.hpp"
#include "ising_ais/rng.hpp"

namespace ising_ais {

namespace {

using detail::Point2;

void check_arcs(std::span<const ArcCondition> arcs) {
  if (arcs.empty()) throw StructuralError("at least one boundary arc is required");
  std::vector<ArcCondition> sorted(arcs.begin(), arcs.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.start_deg < b.start_deg; });
  double expect = 0.0;
  for (const auto& arc : sorted) {
    if (arc.value != 1 && arc.value != -1) {
      throw StructuralError("arc boundary values must be -1 or +1");
    }
    if (arc.start_deg != expect || !(arc.end_deg > arc.start_deg)) {
      throw StructuralError("arcs must partition [0, 360) into contiguous intervals");
    }
    expect = arc.end_deg;
  }
  if (expect != 360.0) throw StructuralError("arcs must end at 360 degrees");
}

int arc_value(std::span<const ArcCondition> arcs, double angle_deg) {
  for (const auto& arc : arcs) {
    if (angle_deg >= arc.start_deg && angle_deg < arc.end_deg) return arc.value;
  }
  throw StructuralError("angle " + std::to_string(angle_deg) + " not covered by any arc");
}

// Uniform-grid spatial hash for the minimum-distance test.
class PoissonGrid {
 public:
  PoissonGrid(double extent, double radius)
      : radius_(radius), cell_(radius / std::numbers::sqrt2), extent_(extent) {
    dim_ = static_cast<long>(std::ceil(2 * extent / cell_)) + 1;
    cells_.assign(static_cast<std::size_t>(dim_ * dim_), -1);
  }

  bool fits(const Point2& p, const std::vector<Point2>& pts) const {
    const long cx = cell_of(p[0]), cy = cell_of(p[1]);
    for (long y = std::max(0L, cy - 2); y <= std::min(dim_ - 1, cy + 2); ++y) {
      for (long x = std::max(0L, cx - 2); x <= std::min(dim_ - 1, cx + 2); ++x) {
        const int q = cells_[static_cast<std::size_t>(y * dim_ + x)];
        if (q < 0) continue;
        const double dx = pts[q][0] - p[0], dy = pts[q][1] - p[1];
        if (dx * dx + dy * dy < radius_ * radius_) return false;
      }
    }
    return true;
  }

  void insert(const Point2& p, int index) {
    cells_[static_cast<std::size_t>(cell_of(p[1]) * dim_ + cell_of(p[0]))] = index;
  }

 private:
  long cell_of(double v) const {
    return std::clamp(static_cast<long>((v + extent_) / cell_), 0L, dim_ - 1);
  }

  double radius_;
  double cell_;
  double extent_;
  long dim_ = 0;
  std::vector<int> cells_;
};

// Dart throwing inside radius `extent`, then a pass over a fine candidate grid
// in random order so the sample is maximal up to the grid spacing.
std::vector<Point2> poisson_disk(double extent, double radius, Rng& rng) {
  std::vector<Point2> pts;
  PoissonGrid grid(extent, radius);
  auto try_add = [&](const Point2& p) {
    if (p[0] * p[0] + p[1] * p[1] > extent * extent) return false;
    if (!grid.fits(p, pts)) return false;
    grid.insert(p, static_cast<int>(pts.size()));
    pts.push_back(p);
    return true;
  };

  constexpr int kMaxMisses = 2000;
  int misses = 0;
  while (misses < kMaxMisses) {
    const Point2 p{extent * (2 * rng.uniform() - 1), extent * (2 * rng.uniform() - 1)};
    if (p[0] * p[0] + p[1] * p[1] > extent * extent) continue;
    misses = try_add(p) ? 0 : misses + 1;
  }

  const double step = radius / 4;
  const long m = static_cast<long>(std::ceil(extent / step));
  std::vector<Point2> candidates;
  for (long y = -m; y <= m; ++y) {
    for (long x = -m; x <= m; ++x) {
      const Point2 p{x * step, y * step};
      if (p[0] * p[0] + p[1] * p[1] <= extent * extent) candidates.push_back(p);
    }
  }
  for (std::size_t i = candidates.size(); i > 1; --i) {
    std::swap(candidates[i - 1], candidates[rng.below(i)]);
  }
  for (const auto& p : candidates) try_add(p);
  return pts;
}

}  // namespace

Lattice build_disk_triangulation(double mesh_size, std::span<const ArcCondition> arcs,
                                 std::uint64_t seed, double beta) {
  if (!(mesh_size > 0.0 && mesh_size < 1.0)) {
    throw BuildError("mesh size " + std::to_string(mesh_size) +
                     " leaves no room for interior points; need 0 < mesh_size < 1");
  }
  check_arcs(arcs);

  Rng rng(seed, 0xd15c);
  const double inner_radius = 1.0 - 0.5 * mesh_size;
  auto interior = poisson_disk(inner_radius, 0.7 * mesh_size, rng);
  if (interior.empty()) throw BuildError("no interior points could be placed");
  const auto n = static_cast<std::uint32_t>(interior.size());

  const auto n_boundary =
      static_cast<std::uint32_t>(std::ceil(2 * std::numbers::pi / mesh_size));
  BoundarySpec boundary;
  std::vector<Point2> all = interior;
  for (std::uint32_t k = 0; k < n_boundary; ++k) {
    const double deg = 360.0 * k / n_boundary;
    const double rad = 2 * std::numbers::pi * k / n_boundary;
    const Point2 p{std::cos(rad), std::sin(rad)};
    boundary.values.push_back(arc_value(arcs, deg));
    boundary.coords.push_back(p);
    all.push_back(p);
  }

  const auto triangles = detail::delaunay_triangulate(all);
  std::vector<Edge> edges;
  for (const auto& [a, b] : detail::triangle_edges(triangles)) {
    if (b < n) {
      edges.push_back({a, b});
    } else if (a < n) {
      boundary.links.push_back({a, b - n});
    }
  }

  auto field = boundary_to_field(n, boundary);
  return Lattice{IsingGraph(n, std::move(edges), std::move(field), beta),
                 LatticeGeometry{std::move(interior)}, std::move(boundary)};
}

std::vector<ArcCondition> quadrant_arcs(std::array<int, 4> signs) {
  return {{0, 90, signs[0]}, {90, 180, signs[1]}, {180, 270, signs[2]}, {270, 360, signs[3]}};
}

std::vector<ArcCondition> sixty_degree_arcs() {
  return {{0, 60, 1}, {60, 180, -1}, {180, 300, 1}, {300, 360, -1}};
}

}  // namespace ising_ais
