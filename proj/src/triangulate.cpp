#include <cmath>

#include "rockmodel/errors.hpp"
#include "rockmodel/wireframe.hpp"

namespace rockmodel {

namespace {

double orient(const Point2& a, const Point2& b, const Point2& c) {
  return (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
}

// Signed distance of c from the directed line a->b (positive on the left).
double side(const Point2& a, const Point2& b, const Point2& c) {
  const double len = std::hypot(b.u - a.u, b.v - a.v);
  return len > 0.0 ? orient(a, b, c) / len : 0.0;
}

bool strictly_convex(const Point2& a, const Point2& b, const Point2& c) {
  const double la = std::hypot(b.u - a.u, b.v - a.v);
  const double lc = std::hypot(c.u - b.u, c.v - b.v);
  return orient(a, b, c) > 1e-12 * la * lc;
}

bool in_closed_triangle(const Point2& p, const Point2& a, const Point2& b,
                        const Point2& c) {
  return side(a, b, p) >= -kEpsGeom && side(b, c, p) >= -kEpsGeom &&
         side(c, a, p) >= -kEpsGeom;
}

}  // namespace

std::vector<std::array<std::uint32_t, 3>> triangulate(std::span<const Point2> ring) {
  std::vector<std::array<std::uint32_t, 3>> out;
  const std::size_t n = ring.size();
  if (n < 3) {
    throw Error(ErrorCode::kInvalidPolygon, "cannot triangulate fewer than 3 vertices");
  }
  out.reserve(n - 2);
  std::vector<std::uint32_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);

  while (idx.size() > 3) {
    const std::size_t m = idx.size();
    bool clipped = false;
    for (std::size_t k = 0; k < m; ++k) {
      const std::uint32_t ip = idx[(k + m - 1) % m];
      const std::uint32_t ic = idx[k];
      const std::uint32_t in = idx[(k + 1) % m];
      const Point2& a = ring[ip];
      const Point2& b = ring[ic];
      const Point2& c = ring[in];
      if (!strictly_convex(a, b, c)) continue;
      bool blocked = false;
      for (std::size_t j = 0; j < m && !blocked; ++j) {
        const std::uint32_t q = idx[j];
        if (q == ip || q == ic || q == in) continue;
        blocked = in_closed_triangle(ring[q], a, b, c);
      }
      if (blocked) continue;
      out.push_back({ip, ic, in});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
      clipped = true;
      break;
    }
    if (!clipped) {
      throw Error(ErrorCode::kInvalidPolygon,
                  "ear clipping found no ear; ring is not a simple CCW polygon");
    }
  }
  if (!strictly_convex(ring[idx[0]], ring[idx[1]], ring[idx[2]])) {
    throw Error(ErrorCode::kInvalidPolygon,
                "ear clipping left a degenerate final triangle");
  }
  out.push_back({idx[0], idx[1], idx[2]});
  return out;
}

}  // namespace rockmodel
