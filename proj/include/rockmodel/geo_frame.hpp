#pragma once

#include "rockmodel/geometry.hpp"

namespace rockmodel {

/// Geodetic position: latitude/longitude in degrees, altitude in meters above
/// the WGS84 ellipsoid.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  double alt = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Throws kInvalidCoordinate when lat/lon are out of range or any field is
// non-finite.
void check_geo_point(const GeoPoint& p);

struct Distance {
  double meters = 0.0;
};

inline constexpr double kMeanEarthRadius = 6371000.0;
inline constexpr double kWgs84A = 6378137.0;
inline constexpr double kWgs84F = 1.0 / 298.257223563;
// Tangent-plane validity radius for frame conversions.
inline constexpr double kFrameValidity = 100000.0;

/// Right-handed east(x) / north(y) / up(z) frame tangent to the WGS84
/// ellipsoid at `origin`. Conversions go through ECEF.
class LocalFrame {
 public:
  explicit LocalFrame(const GeoPoint& origin);

  const GeoPoint& origin() const { return origin_; }

  Point3 to_enu(const GeoPoint& p) const;
  GeoPoint to_geodetic(const Point3& enu) const;

 private:
  GeoPoint origin_;
  Point3 origin_ecef_;
  // Rows are the east, north and up unit vectors expressed in ECEF.
  Point3 east_, north_, up_;
};

/// Great-circle distance on a sphere of radius kMeanEarthRadius (haversine);
/// altitudes are ignored.
Distance geodesic_distance(const GeoPoint& a, const GeoPoint& b);

/// Throws kOutOfFrame when the point lies more than kFrameValidity from the
/// frame origin.
Point3 geodetic_to_enu(const GeoPoint& p, const LocalFrame& frame);
GeoPoint enu_to_geodetic(const Point3& p, const LocalFrame& frame);

Point3 geodetic_to_ecef(const GeoPoint& p);
GeoPoint ecef_to_geodetic(const Point3& ecef);

}  // namespace rockmodel
