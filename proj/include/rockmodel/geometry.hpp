#pragma once

#include <cmath>

namespace rockmodel {

// Coincidence tolerance for every geometric test, in meters.
inline constexpr double kEpsGeom = 1e-9;

struct Point2 {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;

  Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(const Point3& a, const Point3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}

inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Point2& p) {
  return std::isfinite(p.u) && std::isfinite(p.v);
}

inline bool is_finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

// Closed interval [lo, hi] along one axis, meters.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Classification { kInside, kOutside, kOnBoundary };

// Which model axes a planar subdivision lives in. Plan views are (x, y) and
// sweep along z; profile views are (x, z) and sweep along y.
enum class Plane { kPlanXY, kProfileXZ };

}  // namespace rockmodel
