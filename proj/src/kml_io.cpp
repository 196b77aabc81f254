#include "rockmodel/kml_io.hpp"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <set>

#include "rockmodel/errors.hpp"
#include "text_format.hpp"

namespace rockmodel {

namespace {

std::string_view local_name(std::string_view qualified) {
  const auto colon = qualified.rfind(':');
  return colon == std::string_view::npos ? qualified : qualified.substr(colon + 1);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

struct RawGeometry {
  GeometryKind kind = GeometryKind::kPoint;
  AltitudeMode mode = AltitudeMode::kClampToGround;
  std::string coordinates;
  std::string lon, lat, alt;  // <Model><Location>
  std::string href;
  bool is_model = false;
};

class KmlReader {
 public:
  std::vector<KmlPlacemark> placemarks;

  void start(std::string_view name) {
    text_.clear();
    const bool in_placemark = in("Placemark");
    if (name == "Placemark") {
      placemark_name_.clear();
      geometries_.clear();
    } else if (in_placemark && !current_) {
      if (name == "Point") {
        open(GeometryKind::kPoint);
      } else if (name == "LineString") {
        open(GeometryKind::kLineString);
      } else if (name == "Polygon" || name == "LinearRing") {
        open(GeometryKind::kPolygon);
      } else if (name == "Model") {
        open(GeometryKind::kPoint);
        current_->is_model = true;
      }
    }
    stack_.emplace_back(name);
  }

  void end(std::string_view name) {
    stack_.pop_back();
    const std::string_view parent = stack_.empty() ? std::string_view{} : stack_.back();
    if (name == "name" && parent == "Placemark") {
      placemark_name_ = std::string(trim(text_));
    } else if (current_) {
      if (name == "coordinates" &&
          (current_->kind != GeometryKind::kPolygon || !in("innerBoundaryIs"))) {
        current_->coordinates += ' ';
        current_->coordinates += text_;
      } else if (name == "altitudeMode") {
        const auto mode = trim(text_);
        if (mode == "absolute") {
          current_->mode = AltitudeMode::kAbsolute;
        } else if (mode == "relativeToGround") {
          current_->mode = AltitudeMode::kRelativeToGround;
        } else {
          current_->mode = AltitudeMode::kClampToGround;
        }
      } else if (parent == "Location") {
        if (name == "longitude") current_->lon = text_;
        if (name == "latitude") current_->lat = text_;
        if (name == "altitude") current_->alt = text_;
      } else if (name == "href" && parent == "Link") {
        current_->href = std::string(trim(text_));
      } else if (closes_geometry(name)) {
        geometries_.push_back(std::move(*current_));
        current_.reset();
      }
    }
    if (name == "Placemark") finish_placemark();
    text_.clear();
  }

  void text(std::string_view s) { text_ += s; }

 private:
  bool in(std::string_view name) const {
    return std::find(stack_.begin(), stack_.end(), name) != stack_.end();
  }

  void open(GeometryKind kind) {
    current_ = RawGeometry{};
    current_->kind = kind;
    geometry_root_ = stack_.size();
  }

  bool closes_geometry(std::string_view) const { return stack_.size() == geometry_root_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kCoordinate,
                "placemark '" + placemark_name_ + "': " + what);
  }

  GeoPoint checked(double lon, double lat, double alt) const {
    GeoPoint p{lat, lon, alt};
    if (!(lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0) ||
        !std::isfinite(alt)) {
      fail("coordinate out of range (lon " + std::to_string(lon) + ", lat " +
           std::to_string(lat) + ")");
    }
    return p;
  }

  std::vector<GeoPoint> parse_coordinates(std::string_view text) const {
    std::vector<GeoPoint> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto b = text.find_first_not_of(" \t\r\n", pos);
      if (b == std::string_view::npos) break;
      auto e = text.find_first_of(" \t\r\n", b);
      if (e == std::string_view::npos) e = text.size();
      const std::string_view tuple = text.substr(b, e - b);
      pos = e;
      double values[3] = {0.0, 0.0, 0.0};
      std::size_t n = 0, start = 0;
      for (;;) {
        const auto comma = tuple.find(',', start);
        const std::string_view field = tuple.substr(start, comma - start);
        if (n == 3 || !parse_double(field, values[n])) {
          fail("non-numeric coordinate '" + std::string(tuple) + "'");
        }
        ++n;
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (n < 2) fail("coordinate tuple '" + std::string(tuple) + "' needs lon,lat");
      out.push_back(checked(values[0], values[1], values[2]));
    }
    return out;
  }

  void finish_placemark() {
    for (RawGeometry& g : geometries_) {
      KmlPlacemark p;
      p.name = placemark_name_;
      p.kind = g.kind;
      p.altitude_mode = g.mode;
      if (g.is_model) {
        double lon = 0, lat = 0, alt = 0;
        if (!parse_double(g.lon, lon) || !parse_double(g.lat, lat) ||
            (!trim(g.alt).empty() && !parse_double(g.alt, alt))) {
          fail("non-numeric model location");
        }
        p.coords.push_back(checked(lon, lat, alt));
        p.model_href = g.href;
      } else {
        p.coords = parse_coordinates(g.coordinates);
      }
      if (p.coords.empty()) fail("geometry has no coordinates");
      placemarks.push_back(std::move(p));
    }
    geometries_.clear();
  }

  std::vector<std::string> stack_;
  std::string text_;
  std::string placemark_name_;
  std::optional<RawGeometry> current_;
  std::size_t geometry_root_ = 0;
  std::vector<RawGeometry> geometries_;
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

struct Callbacks {
  KmlReader reader;
  std::optional<Error> error;
  XML_Parser parser = nullptr;
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char**) {
  auto* cb = static_cast<Callbacks*>(data);
  if (cb->error) return;
  cb->reader.start(local_name(name));
}

void XMLCALL on_end(void* data, const XML_Char* name) {
  auto* cb = static_cast<Callbacks*>(data);
  if (cb->error) return;
  try {
    cb->reader.end(local_name(name));
  } catch (const Error& e) {
    cb->error = e;
    XML_StopParser(cb->parser, XML_FALSE);
  }
}

void XMLCALL on_text(void* data, const XML_Char* s, int len) {
  static_cast<Callbacks*>(data)->reader.text(std::string_view(s, static_cast<std::size_t>(len)));
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Degrees carry 10 decimals (about 11 micrometers), meters 6.
std::string degrees(double v) { return detail::fixed(v, 10); }
std::string meters(double v) { return detail::fixed(v, 6); }

std::string coordinate_tuple(const GeoPoint& g) {
  return degrees(g.lon) + "," + degrees(g.lat) + "," + meters(g.alt);
}

std::string kml_header(std::string_view name) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<kml xmlns=\"" +
         std::string(kKmlNamespace) + "\">\n  <Document>\n    <name>" + escape(name) +
         "</name>\n";
}

const char* kKmlFooter = "  </Document>\n</kml>\n";

void require_valid(const PlanarSubdivision& plan) {
  if (plan.plane != Plane::kPlanXY) {
    throw Error(ErrorCode::kWrongPlane, "expected a plan (XY) subdivision");
  }
  const auto diags = validate_subdivision(plan);
  if (!diags.empty()) {
    throw Error(ErrorCode::kValidation, "plan subdivision is invalid: " + diags.front().message);
  }
}

std::string unit_display_name(const UnitRegion& u) {
  return u.name.empty() ? "unit " + std::to_string(u.id) : u.name;
}

}  // namespace

std::vector<KmlPlacemark> parse_kml(std::string_view doc) {
  if (trim(doc).empty()) return {};
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate(nullptr));
  Callbacks cb;
  cb.parser = parser.get();
  XML_SetUserData(parser.get(), &cb);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  const auto status =
      XML_Parse(parser.get(), doc.data(), static_cast<int>(doc.size()), XML_TRUE);
  if (cb.error) throw *cb.error;
  if (status != XML_STATUS_OK) {
    throw Error(ErrorCode::kXmlParse,
                "malformed XML at line " +
                    std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                    XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  return std::move(cb.reader.placemarks);
}

UnitRegion placemark_to_unit(const KmlPlacemark& p, const LocalFrame& frame, Plane plane,
                             int id, std::vector<std::string>* warnings) {
  const std::string label = "placemark '" + p.name + "'";
  std::vector<Point3> local;
  local.reserve(p.coords.size());
  for (const GeoPoint& g : p.coords) local.push_back(frame.to_enu(g));

  bool closed = false;
  if (local.size() >= 2 && norm(local.back() - local.front()) <= 1.0) {
    closed = true;
    local.pop_back();
  }
  Ring ring;
  for (const Point3& q : local) {
    const Point2 v = plane == Plane::kPlanXY ? Point2{q.x, q.y} : Point2{q.x, q.z};
    if (ring.empty() || std::hypot(v.u - ring.back().u, v.v - ring.back().v) > kEpsGeom) {
      ring.push_back(v);
    }
  }
  if (ring.size() >= 2 &&
      std::hypot(ring.back().u - ring.front().u, ring.back().v - ring.front().v) <= kEpsGeom) {
    ring.pop_back();
  }
  if (p.kind == GeometryKind::kPoint || ring.size() < 3) {
    throw Error(ErrorCode::kDegenerateRing, label + " has fewer than 3 distinct vertices");
  }
  if (p.kind == GeometryKind::kLineString && !closed) {
    throw Error(ErrorCode::kOpenRing,
                label + " is an open path (first and last points more than 1 m apart)");
  }
  if (signed_area2(ring) < 0.0) {
    std::reverse(ring.begin(), ring.end());
    if (warnings) warnings->push_back(label + ": clockwise ring reversed to counterclockwise");
  }
  return UnitRegion{id, p.name, std::move(ring), std::nullopt};
}

XmlDocument write_kml_model(const GeoModel& model, std::string_view collada_href) {
  XmlDocument doc;
  std::string href(collada_href);
  if (model.cells.empty()) {
    href.clear();
    doc.warnings.push_back("model has no cells; KML Model carries an empty geometry link");
  }
  const GeoPoint& o = model.frame.origin();
  std::string& s = doc.text;
  s = kml_header("rockmodel");
  s += "    <Placemark>\n      <name>geological model</name>\n      <Model>\n";
  s += "        <altitudeMode>absolute</altitudeMode>\n";
  s += "        <Location>\n          <longitude>" + degrees(o.lon) +
       "</longitude>\n          <latitude>" + degrees(o.lat) +
       "</latitude>\n          <altitude>" + meters(o.alt) + "</altitude>\n        </Location>\n";
  s += "        <Orientation>\n          <heading>0</heading>\n          <tilt>0</tilt>\n"
       "          <roll>0</roll>\n        </Orientation>\n";
  s += "        <Scale>\n          <x>1</x>\n          <y>1</y>\n          <z>1</z>\n"
       "        </Scale>\n";
  s += "        <Link>\n          <href>" + escape(href) + "</href>\n        </Link>\n";
  s += "      </Model>\n    </Placemark>\n";
  s += kKmlFooter;
  return doc;
}

XmlDocument write_collada(const GeoModel& model, const Palette& palette) {
  XmlDocument doc;
  std::set<int> layers;
  for (const ModelCell& c : model.cells) layers.insert(c.layer_id);

  std::string& s = doc.text;
  s = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<COLLADA xmlns=\"" +
      std::string(kColladaNamespace) + "\" version=\"1.4.1\">\n";
  s += "  <asset>\n    <contributor>\n      <authoring_tool>rockmodel</authoring_tool>\n"
       "    </contributor>\n    <created>1970-01-01T00:00:00Z</created>\n"
       "    <modified>1970-01-01T00:00:00Z</modified>\n"
       "    <unit name=\"meter\" meter=\"1\"/>\n    <up_axis>Z_UP</up_axis>\n  </asset>\n";

  s += "  <library_effects>\n";
  for (int layer : layers) {
    Rgba c = kFallbackColor;
    if (auto it = palette.find(layer); it != palette.end()) {
      c = it->second;
    } else {
      doc.warnings.push_back("palette has no color for layer " + std::to_string(layer) +
                             "; using fallback gray");
    }
    const std::string id = "layer" + std::to_string(layer);
    s += "    <effect id=\"" + id + "-effect\">\n      <profile_COMMON>\n"
         "        <technique sid=\"common\">\n          <lambert>\n"
         "            <diffuse>\n              <color>";
    for (int k = 0; k < 4; ++k) {
      s += detail::fixed(c[static_cast<std::size_t>(k)] / 255.0, 6);
      s += k < 3 ? " " : "";
    }
    s += "</color>\n            </diffuse>\n          </lambert>\n        </technique>\n"
         "      </profile_COMMON>\n    </effect>\n";
  }
  s += "  </library_effects>\n  <library_materials>\n";
  for (int layer : layers) {
    const std::string id = "layer" + std::to_string(layer);
    s += "    <material id=\"" + id + "-material\" name=\"" + id +
         "\">\n      <instance_effect url=\"#" + id + "-effect\"/>\n    </material>\n";
  }
  s += "  </library_materials>\n  <library_geometries>\n";
  for (std::size_t i = 0; i < model.cells.size(); ++i) {
    const ModelCell& cell = model.cells[i];
    const TriMesh& m = cell.mesh;
    const std::string name = object_name(m, i);
    const std::string material = "layer" + std::to_string(cell.layer_id) + "-material";
    s += "    <geometry id=\"" + name + "-mesh\" name=\"" + name + "\">\n      <mesh>\n";
    s += "        <source id=\"" + name + "-positions\">\n          <float_array id=\"" + name +
         "-positions-array\" count=\"" + std::to_string(3 * m.vertices.size()) + "\">";
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
      const Point3& p = m.vertices[v];
      s += (v ? " " : "") + meters(p.x) + " " + meters(p.y) + " " + meters(p.z);
    }
    s += "</float_array>\n          <technique_common>\n            <accessor source=\"#" +
         name + "-positions-array\" count=\"" + std::to_string(m.vertices.size()) +
         "\" stride=\"3\">\n              <param name=\"X\" type=\"float\"/>\n"
         "              <param name=\"Y\" type=\"float\"/>\n"
         "              <param name=\"Z\" type=\"float\"/>\n            </accessor>\n"
         "          </technique_common>\n        </source>\n";
    s += "        <vertices id=\"" + name + "-vertices\">\n          <input semantic=\"POSITION\" "
         "source=\"#" + name + "-positions\"/>\n        </vertices>\n";
    s += "        <triangles material=\"" + material + "\" count=\"" +
         std::to_string(m.triangles.size()) +
         "\">\n          <input semantic=\"VERTEX\" source=\"#" + name +
         "-vertices\" offset=\"0\"/>\n          <p>";
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
      const Triangle& tri = m.triangles[t];
      s += (t ? " " : "") + std::to_string(tri[0]) + " " + std::to_string(tri[1]) + " " +
           std::to_string(tri[2]);
    }
    s += "</p>\n        </triangles>\n      </mesh>\n    </geometry>\n";
  }
  s += "  </library_geometries>\n  <library_visual_scenes>\n"
       "    <visual_scene id=\"scene\" name=\"scene\">\n";
  for (std::size_t i = 0; i < model.cells.size(); ++i) {
    const ModelCell& cell = model.cells[i];
    const std::string name = object_name(cell.mesh, i);
    const std::string material = "layer" + std::to_string(cell.layer_id) + "-material";
    s += "      <node id=\"" + name + "\" name=\"" + name + "\">\n        <instance_geometry url=\"#" +
         name + "-mesh\">\n          <bind_material>\n            <technique_common>\n"
         "              <instance_material symbol=\"" + material + "\" target=\"#" + material +
         "\"/>\n            </technique_common>\n          </bind_material>\n"
         "        </instance_geometry>\n      </node>\n";
  }
  s += "    </visual_scene>\n  </library_visual_scenes>\n  <scene>\n"
       "    <instance_visual_scene url=\"#scene\"/>\n  </scene>\n</COLLADA>\n";
  return doc;
}

std::string write_kml_extruded(const PlanarSubdivision& plan, const LocalFrame& frame,
                               double base_alt, double top_alt) {
  if (!(base_alt < top_alt)) {
    throw Error(ErrorCode::kInvertedAltitude,
                "extruded KML needs base altitude below top altitude");
  }
  require_valid(plan);
  const double z = top_alt - frame.origin().alt;
  std::string s = kml_header("extruded footprint");
  for (const UnitRegion& u : plan.units) {
    s += "    <Placemark>\n      <name>" + escape(unit_display_name(u)) +
         "</name>\n      <Polygon>\n        <extrude>1</extrude>\n"
         "        <altitudeMode>absolute</altitudeMode>\n        <outerBoundaryIs>\n"
         "          <LinearRing>\n            <coordinates>";
    for (std::size_t i = 0; i <= u.ring.size(); ++i) {
      const Point2& v = u.ring[i % u.ring.size()];
      GeoPoint g = frame.to_geodetic({v.u, v.v, z});
      g.alt = top_alt;
      s += (i ? " " : "") + coordinate_tuple(g);
    }
    s += "</coordinates>\n          </LinearRing>\n        </outerBoundaryIs>\n"
         "      </Polygon>\n    </Placemark>\n";
  }
  s += kKmlFooter;
  return s;
}

std::string write_kml_paths(const PlanarSubdivision& plan, const LocalFrame& frame) {
  require_valid(plan);
  std::string s = kml_header("traced outlines");
  for (const UnitRegion& u : plan.units) {
    s += "    <Placemark>\n      <name>" + escape(unit_display_name(u)) +
         "</name>\n      <LineString>\n        <altitudeMode>clampToGround</altitudeMode>\n"
         "        <coordinates>";
    for (std::size_t i = 0; i <= u.ring.size(); ++i) {
      const Point2& v = u.ring[i % u.ring.size()];
      GeoPoint g = frame.to_geodetic({v.u, v.v, 0.0});
      g.alt = 0.0;
      s += (i ? " " : "") + coordinate_tuple(g);
    }
    s += "</coordinates>\n      </LineString>\n    </Placemark>\n";
  }
  s += kKmlFooter;
  return s;
}

}  // namespace rockmodel
