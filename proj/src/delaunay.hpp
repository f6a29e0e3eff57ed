#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace ising_ais::detail {

using Point2 = std::array<double, 2>;
using Triangle = std::array<std::uint32_t, 3>;

/// Bowyer-Watson Delaunay triangulation. Points are inserted in the given
/// order; the result indexes into `points`.
std::vector<Triangle> delaunay_triangulate(std::span<const Point2> points);

/// Unique undirected edges (a < b) of a triangle list, sorted.
std::vector<std::array<std::uint32_t, 2>> triangle_edges(std::span<const Triangle> triangles);

}  // namespace ising_ais::detail
