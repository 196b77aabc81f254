#include "rockmodel/project.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rockmodel/errors.hpp"
#include "text_format.hpp"

namespace rockmodel {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
  const auto mark = n.Mark();
  std::string where = mark.is_null() ? "" : "line " + std::to_string(mark.line + 1) + ": ";
  throw Error(ErrorCode::kProject, "project file " + where + what);
}

void check_keys(const YAML::Node& map, const std::string& context,
                const std::set<std::string>& allowed) {
  if (!map.IsMap()) fail(map, context + " must be a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + context);
  }
}

const YAML::Node require(const YAML::Node& map, const std::string& key,
                         const std::string& context) {
  const YAML::Node n = map[key];
  if (!n) fail(map, context + " is missing '" + key + "'");
  return n;
}

double number(const YAML::Node& n, const std::string& what) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(n, what + " must be a number");
  }
}

Interval interval(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() != 2) fail(n, what + " must be [lo, hi]");
  return {number(n[0], what), number(n[1], what)};
}

Ring ring(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) fail(n, what + " must be a list of [u, v] pairs");
  Ring r;
  for (const auto& pt : n) {
    if (!pt.IsSequence() || pt.size() != 2) fail(pt, what + " vertices must be [u, v]");
    r.push_back({number(pt[0], what), number(pt[1], what)});
  }
  return r;
}

SubdivisionSource subdivision(const YAML::Node& n, const std::string& context) {
  check_keys(n, context, {"source", "units"});
  SubdivisionSource src;
  if (n["source"] && n["units"]) fail(n, context + " takes either 'source' or 'units', not both");
  if (n["source"]) {
    src.kml = n["source"].as<std::string>();
    return src;
  }
  const YAML::Node units = require(n, "units", context);
  if (!units.IsSequence()) fail(units, context + ".units must be a list");
  for (const auto& u : units) {
    const std::string uctx = context + " unit";
    check_keys(u, uctx, {"id", "name", "ring", "sweep"});
    UnitRegion unit;
    try {
      unit.id = require(u, "id", uctx).as<int>();
    } catch (const YAML::Exception&) {
      fail(u["id"], uctx + " id must be an integer");
    }
    if (u["name"]) unit.name = u["name"].as<std::string>();
    unit.ring = ring(require(u, "ring", uctx), uctx + " ring");
    if (u["sweep"]) unit.sweep_interval = interval(u["sweep"], uctx + " sweep");
    src.units.push_back(std::move(unit));
  }
  return src;
}

std::string num(double v) { return detail::shortest(v); }

void render_source(std::ostringstream& out, const SubdivisionSource& s) {
  if (s.kml) {
    out << "  source: " << s.kml->generic_string() << "\n";
    return;
  }
  out << "  units:\n";
  for (const UnitRegion& u : s.units) {
    out << "    - id: " << u.id << "\n";
    if (!u.name.empty()) out << "      name: " << YAML::Node(u.name) << "\n";
    out << "      ring: [";
    for (std::size_t i = 0; i < u.ring.size(); ++i) {
      out << (i ? ", " : "") << "[" << num(u.ring[i].u) << ", " << num(u.ring[i].v) << "]";
    }
    out << "]\n";
    if (u.sweep_interval) {
      out << "      sweep: [" << num(u.sweep_interval->lo) << ", " << num(u.sweep_interval->hi)
          << "]\n";
    }
  }
}

}  // namespace

fs::path Project::resolve(const fs::path& p) const {
  return p.is_absolute() ? p : base_dir() / p;
}

fs::path Project::resolved_output_dir() const {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return fs::path(env);
  return resolve(output_dir);
}

Project parse_project(std::string_view yaml, const fs::path& project_path) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kProject, "project file: " + e.msg + " at line " +
                                         std::to_string(e.mark.line + 1));
  }
  Project p;
  p.path = project_path;
  try {
    check_keys(root, "project",
               {"frame_origin", "plan", "profile", "altitudes", "profile_x_offset", "intervals",
                "palette", "output_dir"});
    const YAML::Node origin = require(root, "frame_origin", "project");
    check_keys(origin, "frame_origin", {"lat", "lon", "alt"});
    p.frame_origin.lat = number(require(origin, "lat", "frame_origin"), "frame_origin.lat");
    p.frame_origin.lon = number(require(origin, "lon", "frame_origin"), "frame_origin.lon");
    if (origin["alt"]) p.frame_origin.alt = number(origin["alt"], "frame_origin.alt");
    try {
      check_geo_point(p.frame_origin);
    } catch (const Error& e) {
      fail(origin, std::string("frame_origin: ") + e.what());
    }

    p.plan = subdivision(require(root, "plan", "project"), "plan");
    p.profile = subdivision(require(root, "profile", "project"), "profile");

    const YAML::Node alt = require(root, "altitudes", "project");
    check_keys(alt, "altitudes", {"max_alt", "terrain_alt", "underground_pad"});
    p.max_alt = number(require(alt, "max_alt", "altitudes"), "altitudes.max_alt");
    p.terrain_alt = number(require(alt, "terrain_alt", "altitudes"), "altitudes.terrain_alt");
    if (alt["underground_pad"]) {
      p.underground_pad = number(alt["underground_pad"], "altitudes.underground_pad");
    }

    if (root["profile_x_offset"]) {
      p.profile_x_offset = number(root["profile_x_offset"], "profile_x_offset");
    }
    if (const YAML::Node iv = root["intervals"]) {
      check_keys(iv, "intervals", {"plan_z", "profile_y"});
      if (iv["plan_z"]) p.plan_z = interval(iv["plan_z"], "intervals.plan_z");
      if (iv["profile_y"]) p.profile_y = interval(iv["profile_y"], "intervals.profile_y");
    }
    if (const YAML::Node pal = root["palette"]) {
      if (!pal.IsMap()) fail(pal, "palette must map layer ids to [r, g, b, a]");
      for (const auto& kv : pal) {
        const int layer = kv.first.as<int>();
        const YAML::Node c = kv.second;
        if (!c.IsSequence() || c.size() != 4) fail(c, "palette colors must be [r, g, b, a]");
        Rgba rgba{};
        for (std::size_t k = 0; k < 4; ++k) {
          const int v = c[k].as<int>();
          if (v < 0 || v > 255) fail(c[k], "palette channel out of range 0..255");
          rgba[k] = static_cast<std::uint8_t>(v);
        }
        p.palette[layer] = rgba;
      }
    }
    if (root["output_dir"]) p.output_dir = root["output_dir"].as<std::string>();
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kProject, "project file line " + std::to_string(e.mark.line + 1) +
                                         ": " + e.msg);
  }
  return p;
}

Project load_project(const fs::path& project_path) {
  std::ifstream in(project_path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot read project file " + project_path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_project(text.str(), project_path);
}

std::string render_project(const Project& p) {
  std::ostringstream out;
  out << "# rockmodel project. Paths are relative to this file.\n"
         "\n"
         "# Local frame origin (degrees, meters). All geometry below is in meters\n"
         "# east (x), north (y) and up (z) of this point.\n"
         "frame_origin:\n"
      << "  lat: " << num(p.frame_origin.lat) << "\n"
      << "  lon: " << num(p.frame_origin.lon) << "\n"
      << "  alt: " << num(p.frame_origin.alt) << "\n"
      << "\n# Plan view: rock-mass footprints, traced as closed paths.\nplan:\n";
  render_source(out, p.plan);
  out << "\n# Profile view: layer bands in the x-z plane.\nprofile:\n";
  render_source(out, p.profile);
  out << "\n# Geodetic altitudes read off the viewer.\naltitudes:\n"
      << "  max_alt: " << num(p.max_alt) << "\n"
      << "  terrain_alt: " << num(p.terrain_alt) << "\n"
      << "  underground_pad: " << num(p.underground_pad) << "\n"
      << "\n# Shift applied to profile x coordinates.\n"
      << "profile_x_offset: " << num(p.profile_x_offset) << "\n";
  if (p.plan_z || p.profile_y) {
    out << "\nintervals:\n";
    if (p.plan_z) out << "  plan_z: [" << num(p.plan_z->lo) << ", " << num(p.plan_z->hi) << "]\n";
    if (p.profile_y) {
      out << "  profile_y: [" << num(p.profile_y->lo) << ", " << num(p.profile_y->hi) << "]\n";
    }
  } else {
    out << "\n# Sweep ranges default to [terrain - pad, max] for plan units and the\n"
           "# plan's y extent for profile units. Uncomment to override.\n"
           "# intervals:\n#   plan_z: [420, 470]\n#   profile_y: [0, 70]\n";
  }
  out << "\n# Layer colors, RGBA 0-255.\npalette:\n";
  for (const auto& [layer, c] : p.palette) {
    out << "  " << layer << ": [" << int(c[0]) << ", " << int(c[1]) << ", " << int(c[2]) << ", "
        << int(c[3]) << "]\n";
  }
  if (p.palette.empty()) out << "  {}\n";
  out << "\noutput_dir: " << p.output_dir.generic_string() << "\n";
  return out.str();
}

}  // namespace rockmodel
