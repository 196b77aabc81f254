#include "rockmodel/geo_frame.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rockmodel/errors.hpp"

namespace rockmodel {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kE2 = kWgs84F * (2.0 - kWgs84F);

std::string describe(const GeoPoint& p) {
  return "(" + std::to_string(p.lat) + ", " + std::to_string(p.lon) + ", " +
         std::to_string(p.alt) + ")";
}

}  // namespace

void check_geo_point(const GeoPoint& p) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon) || !std::isfinite(p.alt) ||
      p.lat < -90.0 || p.lat > 90.0 || p.lon < -180.0 || p.lon > 180.0) {
    throw Error(ErrorCode::kInvalidCoordinate,
                "invalid geodetic coordinate " + describe(p));
  }
}

Point3 geodetic_to_ecef(const GeoPoint& p) {
  const double lat = p.lat * kDeg;
  const double lon = p.lon * kDeg;
  const double s = std::sin(lat);
  const double n = kWgs84A / std::sqrt(1.0 - kE2 * s * s);
  return {(n + p.alt) * std::cos(lat) * std::cos(lon),
          (n + p.alt) * std::cos(lat) * std::sin(lon),
          (n * (1.0 - kE2) + p.alt) * s};
}

GeoPoint ecef_to_geodetic(const Point3& ecef) {
  const double lon = std::atan2(ecef.y, ecef.x);
  const double rho = std::hypot(ecef.x, ecef.y);
  // Fixed-point iteration on latitude; converges to machine precision within a
  // handful of steps for terrestrial heights.
  double lat = std::atan2(ecef.z, rho * (1.0 - kE2));
  double h = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double s = std::sin(lat);
    const double n = kWgs84A / std::sqrt(1.0 - kE2 * s * s);
    const double c = std::cos(lat);
    h = std::abs(c) > 1e-12 ? rho / c - n : std::abs(ecef.z) - n * (1.0 - kE2);
    const double next = std::atan2(ecef.z, rho * (1.0 - kE2 * n / (n + h)));
    if (std::abs(next - lat) < 1e-15) {
      lat = next;
      break;
    }
    lat = next;
  }
  const double s = std::sin(lat);
  const double n = kWgs84A / std::sqrt(1.0 - kE2 * s * s);
  const double c = std::cos(lat);
  h = std::abs(c) > 1e-12 ? rho / c - n : std::abs(ecef.z) - n * (1.0 - kE2);
  return {lat / kDeg, lon / kDeg, h};
}

LocalFrame::LocalFrame(const GeoPoint& origin) : origin_(origin) {
  check_geo_point(origin);
  origin_ecef_ = geodetic_to_ecef(origin);
  const double lat = origin.lat * kDeg;
  const double lon = origin.lon * kDeg;
  const double sl = std::sin(lat), cl = std::cos(lat);
  const double so = std::sin(lon), co = std::cos(lon);
  east_ = {-so, co, 0.0};
  north_ = {-sl * co, -sl * so, cl};
  up_ = {cl * co, cl * so, sl};
}

Point3 LocalFrame::to_enu(const GeoPoint& p) const {
  check_geo_point(p);
  const Point3 d = geodetic_to_ecef(p) - origin_ecef_;
  const Point3 enu{dot(east_, d), dot(north_, d), dot(up_, d)};
  if (norm(enu) > kFrameValidity) {
    throw Error(ErrorCode::kOutOfFrame,
                "point " + describe(p) + " is more than 100 km from the frame origin");
  }
  return enu;
}

GeoPoint LocalFrame::to_geodetic(const Point3& enu) const {
  if (!is_finite(enu)) {
    throw Error(ErrorCode::kInvalidCoordinate, "non-finite local coordinate");
  }
  if (norm(enu) > kFrameValidity) {
    throw Error(ErrorCode::kOutOfFrame,
                "local point is more than 100 km from the frame origin");
  }
  const Point3 ecef =
      origin_ecef_ + east_ * enu.x + north_ * enu.y + up_ * enu.z;
  return ecef_to_geodetic(ecef);
}

Distance geodesic_distance(const GeoPoint& a, const GeoPoint& b) {
  check_geo_point(a);
  check_geo_point(b);
  const double lat1 = a.lat * kDeg, lat2 = b.lat * kDeg;
  const double dlat = lat2 - lat1;
  const double dlon = (b.lon - a.lon) * kDeg;
  const double sdlat = std::sin(dlat / 2.0);
  const double sdlon = std::sin(dlon / 2.0);
  double h = sdlat * sdlat + std::cos(lat1) * std::cos(lat2) * sdlon * sdlon;
  h = std::min(1.0, h);
  return {2.0 * kMeanEarthRadius * std::asin(std::sqrt(h))};
}

Point3 geodetic_to_enu(const GeoPoint& p, const LocalFrame& frame) {
  return frame.to_enu(p);
}

GeoPoint enu_to_geodetic(const Point3& p, const LocalFrame& frame) {
  return frame.to_geodetic(p);
}

}  // namespace rockmodel
