#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rockmodel/geo_frame.hpp"
#include "rockmodel/solids.hpp"
#include "rockmodel/wireframe.hpp"

namespace rockmodel {

inline constexpr std::string_view kKmlNamespace = "http://www.opengis.net/kml/2.2";
inline constexpr std::string_view kColladaNamespace =
    "http://www.collada.org/2005/11/COLLADASchema";

enum class GeometryKind { kPoint, kLineString, kPolygon };
enum class AltitudeMode { kClampToGround, kAbsolute, kRelativeToGround };

struct KmlPlacemark {
  std::string name;
  GeometryKind kind = GeometryKind::kPoint;
  std::vector<GeoPoint> coords;
  AltitudeMode altitude_mode = AltitudeMode::kClampToGround;
  // Set for <Model> placemarks: the referenced COLLADA file.
  std::string model_href;
};

/// Every placemark geometry in document order; nested folders are flattened
/// depth-first and a MultiGeometry yields one placemark per member. A <Model>
/// is reported as a Point at its Location. Coordinates are lon,lat[,alt].
/// Throws kXmlParse (with line number) or kCoordinate (naming the placemark).
std::vector<KmlPlacemark> parse_kml(std::string_view doc);

/// Projects a traced ring into the model plane: geodetic -> ENU, then drop
/// the axis normal to `plane`. Closed LineStrings (within 1 m) are accepted;
/// clockwise rings are reversed and reported through `warnings`.
UnitRegion placemark_to_unit(const KmlPlacemark& p, const LocalFrame& frame, Plane plane,
                             int id, std::vector<std::string>* warnings = nullptr);

struct XmlDocument {
  std::string text;
  std::vector<std::string> warnings;
};

using Rgba = std::array<std::uint8_t, 4>;
using Palette = std::map<int, Rgba>;

inline constexpr Rgba kFallbackColor{128, 128, 128, 255};

/// KML placing the COLLADA model at the frame origin (absolute altitude, zero
/// orientation, unit scale).
XmlDocument write_kml_model(const GeoModel& model, std::string_view collada_href);

/// COLLADA 1.4.1, Z_UP, meters: one geometry per cell and one material per
/// layer.
XmlDocument write_collada(const GeoModel& model, const Palette& palette);

/// One extruded KML polygon per plan unit at `top_alt`, for previewing the
/// footprint sweep directly in the globe viewer.
std::string write_kml_extruded(const PlanarSubdivision& plan, const LocalFrame& frame,
                               double base_alt, double top_alt);

/// Plan units as closed, ground-clamped paths: the shape a user traces by
/// hand in the viewer.
std::string write_kml_paths(const PlanarSubdivision& plan, const LocalFrame& frame);

}  // namespace rockmodel
