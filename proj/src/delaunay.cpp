#include "delaunay.hpp"

#include <algorithm>

namespace ising_ais::detail {

namespace {

struct Tri {
  Triangle v;
  long double cx, cy, r2;
};

Tri make_tri(std::span<const Point2> pts, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  const long double ax = pts[a][0], ay = pts[a][1];
  const long double bx = pts[b][0], by = pts[b][1];
  const long double cx = pts[c][0], cy = pts[c][1];
  const long double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  const long double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const long double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
  const long double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
  const long double r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy);
  return Tri{{a, b, c}, ux, uy, r2};
}

}  // namespace

std::vector<Triangle> delaunay_triangulate(std::span<const Point2> points) {
  const auto n = static_cast<std::uint32_t>(points.size());
  if (n < 3) return {};

  double lo_x = points[0][0], hi_x = lo_x, lo_y = points[0][1], hi_y = lo_y;
  for (const auto& p : points) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double mx = 0.5 * (lo_x + hi_x), my = 0.5 * (lo_y + hi_y);

  // Working copy with three far-away super-triangle vertices appended.
  std::vector<Point2> pts(points.begin(), points.end());
  pts.push_back({mx - 1e3 * span, my - 1e3 * span});
  pts.push_back({mx + 1e3 * span, my - 1e3 * span});
  pts.push_back({mx, my + 1e3 * span});

  std::vector<Tri> tris{make_tri(pts, n, n + 1, n + 2)};
  std::vector<std::array<std::uint32_t, 2>> cavity;
  std::vector<Tri> kept;

  for (std::uint32_t p = 0; p < n; ++p) {
    const long double px = pts[p][0], py = pts[p][1];
    cavity.clear();
    kept.clear();
    for (const Tri& t : tris) {
      const long double dx = px - t.cx, dy = py - t.cy;
      if (dx * dx + dy * dy < t.r2) {
        for (int k = 0; k < 3; ++k) {
          auto a = t.v[k], b = t.v[(k + 1) % 3];
          if (a > b) std::swap(a, b);
          cavity.push_back({a, b});
        }
      } else {
        kept.push_back(t);
      }
    }
    // Cavity boundary = edges seen exactly once.
    std::sort(cavity.begin(), cavity.end());
    tris.swap(kept);
    for (std::size_t i = 0; i < cavity.size();) {
      std::size_t j = i + 1;
      while (j < cavity.size() && cavity[j] == cavity[i]) ++j;
      if (j - i == 1) tris.push_back(make_tri(pts, cavity[i][0], cavity[i][1], p));
      i = j;
    }
  }

  std::vector<Triangle> out;
  out.reserve(tris.size());
  for (const Tri& t : tris) {
    if (t.v[0] < n && t.v[1] < n && t.v[2] < n) out.push_back(t.v);
  }
  return out;
}

std::vector<std::array<std::uint32_t, 2>> triangle_edges(std::span<const Triangle> triangles) {
  std::vector<std::array<std::uint32_t, 2>> edges;
  edges.reserve(3 * triangles.size());
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      auto a = t[k], b = t[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      edges.push_back({a, b});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace ising_ais::detail
