#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rockmodel/geometry.hpp"

namespace rockmodel {

using Triangle = std::array<std::uint32_t, 3>;

struct CellTag {
  int mass_id = 0;
  int layer_id = 0;

  friend auto operator<=>(const CellTag&, const CellTag&) = default;
};

/// Triangle mesh in local frame meters. Closed meshes are wound so that
/// normals point outward.
struct TriMesh {
  std::vector<Point3> vertices;
  std::vector<Triangle> triangles;
  std::optional<CellTag> tag;
};

struct EdgeProblem {
  enum class Kind { kBoundary, kNonManifold, kOrientation };
  Kind kind;
  std::uint32_t a;
  std::uint32_t b;
};

struct WatertightReport {
  bool watertight = false;
  std::vector<EdgeProblem> problems;

  explicit operator bool() const { return watertight; }
};

/// Every undirected edge must be used by exactly two triangles with opposite
/// directions.
WatertightReport check_watertight(const TriMesh& m);
inline bool is_watertight(const TriMesh& m) { return check_watertight(m).watertight; }

/// Divergence-theorem volume. Throws kOpenMesh for non-watertight input.
double mesh_volume(const TriMesh& m);

double triangle_area(const TriMesh& m, const Triangle& t);

struct Bounds3 {
  Point3 lo;
  Point3 hi;
};

Bounds3 bounds(const TriMesh& m);

double distance_to_triangle(const Point3& p, const Point3& a, const Point3& b,
                            const Point3& c);
double distance_to_mesh(const TriMesh& m, const Point3& p);

// Parity of ray crossings. The ray direction is drawn from a generator
// seeded with `seed`; a hit closer than kEpsGeom to a triangle edge triggers
// a retry with a fresh direction. Throws kOpenMesh for open input.
Classification point_in_mesh(const TriMesh& m, const Point3& p,
                             std::uint64_t seed = 0);

// Reverses every triangle in place.
void flip_winding(TriMesh& m);

// Separates sheets that meet only along an edge or at a vertex. Faces around
// an edge used more than twice are paired radially, then each vertex whose
// incident faces fall into several such sheets is duplicated once per extra
// sheet. Returns the number of vertices added.
std::size_t split_pinched_vertices(TriMesh& m);

/// Wavefront OBJ text: one `o mass<i>_layer<j>` object per mesh, `v` and `f`
/// records only, face indices 1-based and cumulative across objects.
std::string export_obj(std::span<const TriMesh> meshes);

std::string object_name(const TriMesh& m, std::size_t index);

}  // namespace rockmodel
