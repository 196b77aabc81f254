#pragma once

// Shared fixtures and independent readers for the test suites. The readers
// deliberately avoid library code so they can check its output.

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "rockmodel/mesh.hpp"
#include "rockmodel/wireframe.hpp"

namespace testing_support {

using namespace rockmodel;

inline Ring rect(double u0, double v0, double u1, double v1) {
  return {{u0, v0}, {u1, v0}, {u1, v1}, {u0, v1}};
}

inline TriMesh box_mesh(Point3 lo, Point3 hi) {
  TriMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  }
  // Outward winding, two triangles per face.
  m.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                 {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

inline TriMesh unit_cube() { return box_mesh({0, 0, 0}, {1, 1, 1}); }

// Winding number about p; nonzero means inside. Independent of the even-odd
// implementation under test.
inline int winding_number(const Point2& p, const Ring& ring) {
  int wn = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % ring.size()];
    const double side = (b.u - a.u) * (p.v - a.v) - (p.u - a.u) * (b.v - a.v);
    if (a.v <= p.v) {
      if (b.v > p.v && side > 0) ++wn;
    } else if (b.v <= p.v && side < 0) {
      --wn;
    }
  }
  return wn;
}

struct ObjObject {
  std::string name;
  TriMesh mesh;
};

// Minimal OBJ reader: `o`, `v`, `f` records with 1-based global indices.
inline std::vector<ObjObject> parse_obj(const std::string& text) {
  std::vector<ObjObject> objects;
  std::vector<Point3> all;
  std::vector<std::size_t> first_vertex;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "o") {
      objects.push_back({});
      ls >> objects.back().name;
      first_vertex.push_back(all.size());
    } else if (tag == "v") {
      Point3 p;
      ls >> p.x >> p.y >> p.z;
      all.push_back(p);
      objects.back().mesh.vertices.push_back(p);
    } else if (tag == "f") {
      long a, b, c;
      ls >> a >> b >> c;
      const auto base = static_cast<long>(first_vertex.back());
      objects.back().mesh.triangles.push_back({static_cast<std::uint32_t>(a - 1 - base),
                                               static_cast<std::uint32_t>(b - 1 - base),
                                               static_cast<std::uint32_t>(c - 1 - base)});
    }
  }
  return objects;
}

namespace pt = boost::property_tree;

inline pt::ptree parse_xml(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

struct ColladaGeometry {
  std::string name;
  std::size_t float_count = 0;
  std::size_t position_count = 0;
  std::size_t triangle_count = 0;
  std::size_t index_count = 0;
  std::string material;
};

struct ColladaSummary {
  std::string xmlns;
  std::string version;
  std::string unit_meter;
  std::string up_axis;
  std::vector<std::string> materials;
  std::vector<ColladaGeometry> geometries;
  std::size_t scene_nodes = 0;
};

inline std::size_t count_tokens(const std::string& s) {
  std::istringstream in(s);
  std::string tok;
  std::size_t n = 0;
  while (in >> tok) ++n;
  return n;
}

inline ColladaSummary parse_collada(const std::string& text) {
  const pt::ptree tree = parse_xml(text);
  const pt::ptree& root = tree.get_child("COLLADA");
  ColladaSummary s;
  s.xmlns = root.get<std::string>("<xmlattr>.xmlns");
  s.version = root.get<std::string>("<xmlattr>.version");
  s.unit_meter = root.get<std::string>("asset.unit.<xmlattr>.meter");
  s.up_axis = root.get<std::string>("asset.up_axis");
  for (const auto& [tag, node] : root.get_child("library_materials")) {
    if (tag == "material") s.materials.push_back(node.get<std::string>("<xmlattr>.id"));
  }
  for (const auto& [tag, node] : root.get_child("library_geometries")) {
    if (tag != "geometry") continue;
    ColladaGeometry g;
    g.name = node.get<std::string>("<xmlattr>.name");
    const pt::ptree& mesh = node.get_child("mesh");
    g.float_count = count_tokens(mesh.get<std::string>("source.float_array"));
    g.position_count = mesh.get<std::size_t>("source.technique_common.accessor.<xmlattr>.count");
    g.triangle_count = mesh.get<std::size_t>("triangles.<xmlattr>.count");
    g.index_count = count_tokens(mesh.get<std::string>("triangles.p"));
    g.material = mesh.get<std::string>("triangles.<xmlattr>.material");
    s.geometries.push_back(g);
  }
  for (const auto& [tag, node] : root.get_child("library_visual_scenes.visual_scene")) {
    if (tag == "node") ++s.scene_nodes;
  }
  return s;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rockmodel_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
