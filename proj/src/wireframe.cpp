#include "rockmodel/wireframe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rockmodel/errors.hpp"

namespace rockmodel {

namespace {

double orient(const Point2& a, const Point2& b, const Point2& c) {
  return (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
}

// Sign of orient() with a tolerance scaled to the segment length, so that
// points within kEpsGeom of the line count as collinear.
int orient_sign(const Point2& a, const Point2& b, const Point2& c) {
  const double len = std::hypot(b.u - a.u, b.v - a.v);
  const double o = orient(a, b, c);
  if (std::abs(o) <= kEpsGeom * std::max(len, 1.0)) return 0;
  return o > 0.0 ? 1 : -1;
}

bool on_segment(const Point2& p, const Point2& a, const Point2& b) {
  return distance_to_segment(p, a, b) <= kEpsGeom;
}

// True when the open segments cross at a single interior point.
bool proper_crossing(const Point2& a, const Point2& b, const Point2& c,
                     const Point2& d) {
  const int o1 = orient_sign(a, b, c);
  const int o2 = orient_sign(a, b, d);
  const int o3 = orient_sign(c, d, a);
  const int o4 = orient_sign(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool segments_touch(const Point2& a, const Point2& b, const Point2& c,
                    const Point2& d) {
  return proper_crossing(a, b, c, d) || on_segment(a, c, d) ||
         on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b);
}

// First pair of offending edges (by start index), if any.
std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(
    std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % n];
    if (std::hypot(b.u - a.u, b.v - a.v) <= kEpsGeom) return std::pair{i, (i + 1) % n};
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2& c = ring[j];
      const Point2& d = ring[(j + 1) % n];
      const bool next = j == i + 1;
      const bool prev = i == 0 && j == n - 1;
      if (next) {
        // Shared vertex b == c; only a fold-back onto the other edge is bad.
        if (on_segment(a, c, d) || on_segment(d, a, b)) return std::pair{i, j};
      } else if (prev) {
        // Shared vertex a == d.
        if (on_segment(b, c, d) || on_segment(c, a, b)) return std::pair{i, j};
      } else if (segments_touch(a, b, c, d)) {
        return std::pair{i, j};
      }
    }
  }
  return std::nullopt;
}

// A point guaranteed to lie strictly inside a simple CCW ring.
std::optional<Point2> interior_sample(std::span<const Point2> ring) {
  try {
    const auto tris = triangulate(ring);
    const auto& t = tris.front();
    return Point2{(ring[t[0]].u + ring[t[1]].u + ring[t[2]].u) / 3.0,
                  (ring[t[0]].v + ring[t[1]].v + ring[t[2]].v) / 3.0};
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Does any part of a's boundary run strictly through b's interior?
bool boundary_enters(std::span<const Point2> a, std::span<const Point2> b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = a[i];
    const Point2& q = a[(i + 1) % n];
    if (point_in_polygon(p, b) == Classification::kInside) return true;
    // Split the edge wherever b's vertices touch it and probe each piece.
    std::vector<double> ts{0.0, 1.0};
    const double len2 = (q.u - p.u) * (q.u - p.u) + (q.v - p.v) * (q.v - p.v);
    for (const Point2& r : b) {
      if (on_segment(r, p, q) && len2 > 0.0) {
        ts.push_back(((r.u - p.u) * (q.u - p.u) + (r.v - p.v) * (q.v - p.v)) / len2);
      }
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      if (ts[k + 1] - ts[k] <= 0.0) continue;
      const double t = 0.5 * (ts[k] + ts[k + 1]);
      const Point2 mid{p.u + t * (q.u - p.u), p.v + t * (q.v - p.v)};
      if (point_in_polygon(mid, b) == Classification::kInside) return true;
    }
  }
  return false;
}

bool interiors_overlap(std::span<const Point2> a, std::span<const Point2> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (proper_crossing(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) {
        return true;
      }
    }
  }
  if (boundary_enters(a, b) || boundary_enters(b, a)) return true;
  // Remaining case: boundaries coincide entirely (identical regions).
  if (const auto s = interior_sample(a);
      s && point_in_polygon(*s, b) == Classification::kInside) {
    return true;
  }
  if (const auto s = interior_sample(b);
      s && point_in_polygon(*s, a) == Classification::kInside) {
    return true;
  }
  return false;
}

std::string unit_label(const UnitRegion& u) {
  return "unit " + std::to_string(u.id) + (u.name.empty() ? "" : " (" + u.name + ")");
}

}  // namespace

double signed_area2(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  // Shift to the first vertex to keep products small for georeferenced input.
  const Point2 o = ring[0];
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    sum += (ring[i].u - o.u) * (ring[i + 1].v - o.v) -
           (ring[i + 1].u - o.u) * (ring[i].v - o.v);
  }
  return sum;
}

bool is_simple(std::span<const Point2> ring) {
  return ring.size() >= 3 && !find_self_intersection(ring);
}

double polygon_area(std::span<const Point2> ring) {
  if (ring.size() < 3) {
    throw Error(ErrorCode::kInvalidPolygon, "ring has fewer than 3 vertices");
  }
  if (const auto bad = find_self_intersection(ring)) {
    throw Error(ErrorCode::kInvalidPolygon,
                "ring self-intersects at edges " + std::to_string(bad->first) +
                    " and " + std::to_string(bad->second));
  }
  const double a = std::abs(signed_area2(ring)) / 2.0;
  if (a <= kEpsGeom * kEpsGeom) {
    throw Error(ErrorCode::kInvalidPolygon, "ring has zero area");
  }
  return a;
}

double distance_to_segment(const Point2& p, const Point2& a, const Point2& b) {
  const double du = b.u - a.u, dv = b.v - a.v;
  const double len2 = du * du + dv * dv;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((p.u - a.u) * du + (p.v - a.v) * dv) / len2, 0.0, 1.0);
  }
  return std::hypot(p.u - (a.u + t * du), p.v - (a.v + t * dv));
}

double distance_to_ring(const Point2& p, std::span<const Point2> ring) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    best = std::min(best, distance_to_segment(p, ring[i], ring[(i + 1) % ring.size()]));
  }
  return best;
}

Classification point_in_polygon(const Point2& p, std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return Classification::kOutside;
  if (distance_to_ring(p, ring) <= kEpsGeom) return Classification::kOnBoundary;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = ring[i];
    const Point2& b = ring[j];
    if ((a.v > p.v) != (b.v > p.v)) {
      const double x = a.u + (p.v - a.v) * (b.u - a.u) / (b.v - a.v);
      if (p.u < x) inside = !inside;
    }
  }
  return inside ? Classification::kInside : Classification::kOutside;
}

Extent2 extent(std::span<const Point2> ring) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Extent2 e{{inf, -inf}, {inf, -inf}};
  for (const Point2& p : ring) {
    e.u.lo = std::min(e.u.lo, p.u);
    e.u.hi = std::max(e.u.hi, p.u);
    e.v.lo = std::min(e.v.lo, p.v);
    e.v.hi = std::max(e.v.hi, p.v);
  }
  return e;
}

Extent2 extent(const PlanarSubdivision& s) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Extent2 e{{inf, -inf}, {inf, -inf}};
  for (const UnitRegion& unit : s.units) {
    const Extent2 r = extent(unit.ring);
    e.u.lo = std::min(e.u.lo, r.u.lo);
    e.u.hi = std::max(e.u.hi, r.u.hi);
    e.v.lo = std::min(e.v.lo, r.v.lo);
    e.v.hi = std::max(e.v.hi, r.v.hi);
  }
  return e;
}

Ring clip_to_band(std::span<const Point2> ring, double lo, double hi) {
  auto clip = [](const Ring& in, double level, bool keep_above) {
    Ring out;
    const std::size_t n = in.size();
    auto inside = [&](const Point2& p) { return keep_above ? p.v >= level : p.v <= level; };
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& cur = in[i];
      const Point2& nxt = in[(i + 1) % n];
      const bool ci = inside(cur), ni = inside(nxt);
      if (ci) out.push_back(cur);
      if (ci != ni) {
        const double t = (level - cur.v) / (nxt.v - cur.v);
        out.push_back({cur.u + t * (nxt.u - cur.u), level});
      }
    }
    return out;
  };
  Ring r(ring.begin(), ring.end());
  r = clip(r, lo, true);
  if (r.empty()) return r;
  return clip(r, hi, false);
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::kNoUnits: return "no-units";
    case Violation::kDuplicateId: return "duplicate-id";
    case Violation::kTooFewVertices: return "too-few-vertices";
    case Violation::kNonFinite: return "non-finite";
    case Violation::kSelfIntersection: return "self-intersection";
    case Violation::kZeroArea: return "zero-area";
    case Violation::kClockwise: return "clockwise";
    case Violation::kBadSweepInterval: return "bad-sweep-interval";
    case Violation::kInteriorOverlap: return "interior-overlap";
  }
  return "unknown";
}

std::vector<Diagnostic> validate_subdivision(const PlanarSubdivision& s) {
  std::vector<Diagnostic> out;
  if (s.units.empty()) {
    out.push_back({Violation::kNoUnits, {}, {}, false, "subdivision has no units"});
    return out;
  }

  std::set<int> seen;
  for (const UnitRegion& u : s.units) {
    if (!seen.insert(u.id).second) {
      out.push_back({Violation::kDuplicateId, {u.id}, {}, false,
                     "unit id " + std::to_string(u.id) + " is used more than once"});
    }
  }

  // Units that pass the per-ring checks take part in the overlap test.
  std::vector<const UnitRegion*> sound;
  for (const UnitRegion& u : s.units) {
    const std::string label = unit_label(u);
    if (u.sweep_interval &&
        !(std::isfinite(u.sweep_interval->lo) && std::isfinite(u.sweep_interval->hi) &&
          u.sweep_interval->lo < u.sweep_interval->hi)) {
      out.push_back({Violation::kBadSweepInterval, {u.id}, {}, false,
                     label + ": sweep interval must satisfy lo < hi"});
    }
    if (u.ring.size() < 3) {
      out.push_back({Violation::kTooFewVertices, {u.id}, {}, false,
                     label + ": ring needs at least 3 vertices"});
      continue;
    }
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < u.ring.size(); ++i) {
      if (!is_finite(u.ring[i])) bad.push_back(i);
    }
    if (!bad.empty()) {
      out.push_back({Violation::kNonFinite, {u.id}, bad, false,
                     label + ": non-finite vertex coordinates"});
      continue;
    }
    if (const auto hit = find_self_intersection(u.ring)) {
      out.push_back({Violation::kSelfIntersection, {u.id}, {hit->first, hit->second}, false,
                     label + ": edges starting at vertices " + std::to_string(hit->first) +
                         " and " + std::to_string(hit->second) + " intersect"});
      continue;
    }
    const double a2 = signed_area2(u.ring);
    if (std::abs(a2) / 2.0 <= kEpsGeom * kEpsGeom) {
      out.push_back({Violation::kZeroArea, {u.id}, {}, false, label + ": zero area"});
      continue;
    }
    if (a2 < 0.0) {
      out.push_back({Violation::kClockwise, {u.id}, {}, true,
                     label + ": ring is clockwise (auto-fixable by reversal)"});
      continue;
    }
    sound.push_back(&u);
  }

  for (std::size_t i = 0; i < sound.size(); ++i) {
    for (std::size_t j = i + 1; j < sound.size(); ++j) {
      const UnitRegion& a = *sound[i];
      const UnitRegion& b = *sound[j];
      const Extent2 ea = extent(a.ring), eb = extent(b.ring);
      if (ea.u.hi < eb.u.lo || eb.u.hi < ea.u.lo || ea.v.hi < eb.v.lo ||
          eb.v.hi < ea.v.lo) {
        continue;
      }
      if (interiors_overlap(a.ring, b.ring)) {
        out.push_back({Violation::kInteriorOverlap, {a.id, b.id}, {}, false,
                       unit_label(a) + " and " + unit_label(b) + " overlap"});
      }
    }
  }
  return out;
}

std::vector<std::string> normalize_orientation(PlanarSubdivision& s) {
  std::vector<std::string> warnings;
  for (UnitRegion& u : s.units) {
    if (u.ring.size() >= 3 && signed_area2(u.ring) < 0.0) {
      std::reverse(u.ring.begin(), u.ring.end());
      warnings.push_back(unit_label(u) + ": clockwise ring reversed to counterclockwise");
    }
  }
  return warnings;
}

double derive_height(double max_alt, double terrain_alt, double underground_pad) {
  if (!std::isfinite(max_alt) || !std::isfinite(terrain_alt) ||
      !std::isfinite(underground_pad)) {
    throw Error(ErrorCode::kInvalidCoordinate, "altitudes must be finite");
  }
  if (max_alt <= terrain_alt) {
    throw Error(ErrorCode::kInvertedAltitude,
                "maximum altitude " + std::to_string(max_alt) +
                    " m must exceed terrain altitude " + std::to_string(terrain_alt) + " m");
  }
  if (underground_pad < 0.0) {
    throw Error(ErrorCode::kValidation, "underground padding must be non-negative");
  }
  return (max_alt - terrain_alt) + underground_pad;
}

BoundingBox bounding_box(const PlanarSubdivision& plan,
                         const PlanarSubdivision& profile,
                         std::optional<Interval> z_window) {
  if (plan.plane != Plane::kPlanXY || profile.plane != Plane::kProfileXZ) {
    throw Error(ErrorCode::kWrongPlane,
                "bounding_box expects a plan (XY) and a profile (XZ) subdivision");
  }
  if (plan.units.empty() || profile.units.empty()) {
    throw Error(ErrorCode::kValidation, "bounding_box needs non-empty subdivisions");
  }
  const Extent2 pe = extent(plan);

  Extent2 qe;
  if (!z_window) {
    qe = extent(profile);
  } else {
    PlanarSubdivision clipped{Plane::kProfileXZ, {}};
    for (const UnitRegion& u : profile.units) {
      Ring r = clip_to_band(u.ring, z_window->lo, z_window->hi);
      if (r.size() >= 3) clipped.units.push_back({u.id, u.name, std::move(r), {}});
    }
    if (clipped.units.empty()) {
      throw Error(ErrorCode::kValidation, "profile lies entirely outside the z window");
    }
    qe = extent(clipped);
  }

  BoundingBox box;
  box.length = std::max(pe.u.hi, qe.u.hi) - std::min(pe.u.lo, qe.u.lo);
  box.width = pe.v.length();
  box.height = qe.v.length();
  return box;
}

}  // namespace rockmodel
