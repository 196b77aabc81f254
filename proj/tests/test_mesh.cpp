#include <gtest/gtest.h>

#include <random>

#include "rockmodel/errors.hpp"
#include "rockmodel/mesh.hpp"
#include "support/test_support.hpp"

using namespace rockmodel;
using testing_support::box_mesh;
using testing_support::parse_obj;
using testing_support::unit_cube;

namespace {

TriMesh transformed(TriMesh m, double k, Point3 shift) {
  for (Point3& p : m.vertices) p = p * k + shift;
  return m;
}

// Octahedron-ish closed mesh with non-axis-aligned faces.
TriMesh octahedron() {
  TriMesh m;
  m.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  m.triangles = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                 {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return m;
}

}  // namespace

TEST(Watertight, Cube) {
  const auto r = check_watertight(unit_cube());
  EXPECT_TRUE(r.watertight);
  EXPECT_TRUE(r.problems.empty());
}

TEST(Watertight, MissingFaceReportsFourBoundaryEdges) {
  TriMesh m = unit_cube();
  m.triangles.erase(m.triangles.begin(), m.triangles.begin() + 2);
  const auto r = check_watertight(m);
  EXPECT_FALSE(r.watertight);
  ASSERT_EQ(r.problems.size(), 4u);
  for (const auto& p : r.problems) EXPECT_EQ(p.kind, EdgeProblem::Kind::kBoundary);
}

TEST(Watertight, SameWindingIsOrientationProblem) {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  m.triangles = {{0, 1, 2}, {1, 2, 3}};
  const auto r = check_watertight(m);
  EXPECT_FALSE(r.watertight);
  bool orientation = false;
  for (const auto& p : r.problems) orientation |= p.kind == EdgeProblem::Kind::kOrientation;
  EXPECT_TRUE(orientation);
}

TEST(Watertight, EdgeUsedThreeTimesIsNonManifold) {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}};
  m.triangles = {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}};
  bool nonmanifold = false;
  for (const auto& p : check_watertight(m).problems) {
    nonmanifold |= p.kind == EdgeProblem::Kind::kNonManifold;
  }
  EXPECT_TRUE(nonmanifold);
}

TEST(MeshVolume, Cubes) {
  EXPECT_NEAR(mesh_volume(unit_cube()), 1.0, 1e-12);
  EXPECT_NEAR(mesh_volume(transformed(unit_cube(), 2.0, {0, 0, 0})), 8.0, 1e-12);
  EXPECT_NEAR(mesh_volume(transformed(unit_cube(), 1.0, {1000, 1000, 1000})), 1.0, 1e-9);
}

TEST(MeshVolume, TranslationAndScale) {
  const TriMesh o = octahedron();
  const double v = mesh_volume(o);
  EXPECT_NEAR(v, 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(mesh_volume(transformed(o, 1.0, {-5e4, 3e5, 470})), v, 1e-9 * v);
  for (double k : {0.1, 2.5, 40.0}) {
    EXPECT_NEAR(mesh_volume(transformed(o, k, {0, 0, 0})), k * k * k * v, 1e-9 * k * k * k * v);
  }
}

TEST(MeshVolume, InwardWindingIsNegative) {
  TriMesh m = unit_cube();
  flip_winding(m);
  EXPECT_NEAR(mesh_volume(m), -1.0, 1e-12);
}

TEST(MeshVolume, OpenMeshThrows) {
  TriMesh m = unit_cube();
  m.triangles.pop_back();
  try {
    mesh_volume(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOpenMesh);
  }
}

TEST(PointInMesh, Examples) {
  const TriMesh m = unit_cube();
  EXPECT_EQ(point_in_mesh(m, {0.5, 0.5, 0.5}), Classification::kInside);
  EXPECT_EQ(point_in_mesh(m, {3, 0.5, 0.5}), Classification::kOutside);
  EXPECT_EQ(point_in_mesh(m, {0.5, 0.5, 1.0}), Classification::kOnBoundary);
  EXPECT_EQ(point_in_mesh(m, {1.0 / 3, 2.0 / 3, 0.0}), Classification::kOnBoundary);
}

TEST(PointInMesh, OpenMeshThrows) {
  TriMesh m = unit_cube();
  m.triangles.pop_back();
  EXPECT_THROW(point_in_mesh(m, {0.5, 0.5, 0.5}), Error);
}

TEST(PointInMesh, IndependentOfRayDirection) {
  const TriMesh m = octahedron();
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  for (int i = 0; i < 2000; ++i) {
    const Point3 p{d(rng), d(rng), d(rng)};
    if (distance_to_mesh(m, p) < 1e-6) continue;
    const Classification expected = std::abs(p.x) + std::abs(p.y) + std::abs(p.z) < 1.0
                                        ? Classification::kInside
                                        : Classification::kOutside;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ASSERT_EQ(point_in_mesh(m, p, seed), expected);
    }
  }
}

TEST(PointInMesh, RayThroughEdgesAndVertices) {
  // Points on the cube's symmetry axes send axis-aligned candidate rays
  // straight through edges; the result must still be right.
  const TriMesh m = unit_cube();
  EXPECT_EQ(point_in_mesh(m, {0.5, 0.5, 0.5}, 1), Classification::kInside);
  EXPECT_EQ(point_in_mesh(m, {-1, 0, 0}, 2), Classification::kOutside);
  EXPECT_EQ(point_in_mesh(m, {-1, -1, -1}, 3), Classification::kOutside);
}

TEST(DistanceToTriangle, Regions) {
  const Point3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
  EXPECT_NEAR(distance_to_triangle({0.2, 0.2, 3}, a, b, c), 3.0, 1e-12);
  EXPECT_NEAR(distance_to_triangle({-1, 0, 0}, a, b, c), 1.0, 1e-12);
  EXPECT_NEAR(distance_to_triangle({1, 1, 0}, a, b, c), std::sqrt(0.5), 1e-12);
}

TEST(ExportObj, SingleTriangle) {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}};
  const std::string obj = export_obj(std::span<const TriMesh>(&m, 1));
  EXPECT_NE(obj.find("\nf 1 2 3\n"), std::string::npos);
  const auto objects = parse_obj(obj);
  ASSERT_EQ(objects.size(), 1u);
  EXPECT_EQ(objects[0].mesh.vertices.size(), 3u);
  EXPECT_EQ(objects[0].mesh.triangles.size(), 1u);
}

TEST(ExportObj, CumulativeIndices) {
  std::vector<TriMesh> cubes{unit_cube(), box_mesh({2, 0, 0}, {3, 1, 1})};
  cubes[0].tag = CellTag{1, 2};
  cubes[1].tag = CellTag{3, 1};
  const std::string obj = export_obj(cubes);
  EXPECT_NE(obj.find("o mass1_layer2\n"), std::string::npos);
  EXPECT_NE(obj.find("o mass3_layer1\n"), std::string::npos);
  const std::string second = obj.substr(obj.find("o mass3_layer1"));
  std::istringstream in(second);
  std::string line;
  int faces = 0;
  while (std::getline(in, line)) {
    if (line.rfind("f ", 0) != 0) continue;
    ++faces;
    std::istringstream ls(line.substr(2));
    int idx;
    while (ls >> idx) {
      EXPECT_GE(idx, 9);
      EXPECT_LE(idx, 16);
    }
  }
  EXPECT_EQ(faces, 12);
}

TEST(ExportObj, EmptyIsHeaderOnly) {
  const std::string obj = export_obj({});
  EXPECT_FALSE(obj.empty());
  EXPECT_EQ(obj.find("\nv "), std::string::npos);
  EXPECT_EQ(obj.find("\no "), std::string::npos);
  EXPECT_EQ(obj.back(), '\n');
}

TEST(ExportObj, RoundTripIsExact) {
  TriMesh m = transformed(octahedron(), 123.456789, {0.1, 1e5 / 3.0, 470.000000001});
  const std::string obj = export_obj(std::span<const TriMesh>(&m, 1));
  EXPECT_EQ(obj.find('\r'), std::string::npos);
  const auto back = parse_obj(obj);
  ASSERT_EQ(back.size(), 1u);
  ASSERT_EQ(back[0].mesh.vertices.size(), m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    EXPECT_LE(norm(back[0].mesh.vertices[i] - m.vertices[i]), 1e-9);
  }
  EXPECT_EQ(back[0].mesh.triangles, m.triangles);
}

TEST(SplitPinchedVertices, TwoCubesSharingAnEdge) {
  TriMesh a = box_mesh({0, 0, 0}, {1, 1, 1});
  const TriMesh b = box_mesh({1, 1, 0}, {2, 2, 1});
  // Weld b's vertices onto a's where they coincide.
  std::vector<std::uint32_t> remap;
  for (const Point3& p : b.vertices) {
    std::uint32_t idx = static_cast<std::uint32_t>(a.vertices.size());
    for (std::uint32_t i = 0; i < a.vertices.size(); ++i) {
      if (norm(a.vertices[i] - p) == 0.0) idx = i;
    }
    if (idx == a.vertices.size()) a.vertices.push_back(p);
    remap.push_back(idx);
  }
  for (const Triangle& t : b.triangles) a.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  EXPECT_FALSE(is_watertight(a));
  EXPECT_EQ(split_pinched_vertices(a), 2u);
  EXPECT_TRUE(is_watertight(a));
  EXPECT_NEAR(mesh_volume(a), 2.0, 1e-12);
}
