#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "rockmodel/errors.hpp"
#include "rockmodel/sample.hpp"
#include "rockmodel/wireframe.hpp"
#include "support/test_support.hpp"

using namespace rockmodel;
using testing_support::rect;
using testing_support::winding_number;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kUsage;
}

Ring scaled(Ring r, double k, Point2 shift = {0, 0}) {
  for (Point2& p : r) p = {p.u * k + shift.u, p.v * k + shift.v};
  return r;
}

std::vector<Ring> test_polygons() {
  std::vector<Ring> rings;
  for (const auto& u : sample::plan().units) rings.push_back(u.ring);
  for (const auto& u : sample::profile().units) rings.push_back(u.ring);
  rings.push_back(rect(0, 0, 1, 1));
  rings.push_back({{0, 0}, {10, 0}, {10, 10}, {6, 10}, {6, 3}, {4, 3}, {4, 10}, {0, 10}});  // U shape
  rings.push_back({{0, 0}, {4, 1}, {8, 0}, {7, 4}, {8, 8}, {4, 7}, {0, 8}, {1, 4}});       // star-ish
  return rings;
}

}  // namespace

TEST(PolygonArea, Examples) {
  EXPECT_DOUBLE_EQ(polygon_area(rect(0, 0, 1, 1)), 1.0);
  EXPECT_DOUBLE_EQ(polygon_area(Ring{{0, 0}, {2, 0}, {0, 2}}), 2.0);
  EXPECT_EQ(code_of([] { polygon_area(Ring{{0, 0}, {1, 1}, {2, 2}}); }),
            ErrorCode::kInvalidPolygon);
}

TEST(PolygonArea, SelfIntersectingRejected) {
  EXPECT_EQ(code_of([] { polygon_area(Ring{{0, 0}, {1, 1}, {1, 0}, {0, 1}}); }),
            ErrorCode::kInvalidPolygon);
}

TEST(PolygonArea, TranslationInvariantAndQuadraticInScale) {
  for (const Ring& r : test_polygons()) {
    const double a = polygon_area(r);
    EXPECT_NEAR(polygon_area(scaled(r, 1.0, {1234.5, -987.25})), a, 1e-9 * a);
    for (double k : {0.5, 3.0, 17.0}) {
      EXPECT_NEAR(polygon_area(scaled(r, k)), k * k * a, 1e-9 * k * k * a);
    }
  }
}

TEST(PointInPolygon, Examples) {
  const Ring sq = rect(0, 0, 1, 1);
  EXPECT_EQ(point_in_polygon({0.5, 0.5}, sq), Classification::kInside);
  EXPECT_EQ(point_in_polygon({2, 2}, sq), Classification::kOutside);
  EXPECT_EQ(point_in_polygon({1, 0.5}, sq), Classification::kOnBoundary);
  EXPECT_EQ(point_in_polygon({0, 0}, sq), Classification::kOnBoundary);
  EXPECT_EQ(point_in_polygon({0.5, 1 + 1e-10}, sq), Classification::kOnBoundary);
  EXPECT_EQ(point_in_polygon({0.5, 1 + 1e-7}, sq), Classification::kOutside);
}

TEST(PointInPolygon, AgreesWithWindingNumber) {
  std::mt19937_64 rng(11);
  for (const Ring& r : test_polygons()) {
    const Extent2 e = extent(r);
    std::uniform_real_distribution<double> du(e.u.lo - 1, e.u.hi + 1);
    std::uniform_real_distribution<double> dv(e.v.lo - 1, e.v.hi + 1);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
      const Point2 p{du(rng), dv(rng)};
      if (distance_to_ring(p, r) <= kEpsGeom) continue;
      ++checked;
      const bool inside = winding_number(p, r) != 0;
      ASSERT_EQ(point_in_polygon(p, r),
                inside ? Classification::kInside : Classification::kOutside)
          << p.u << "," << p.v;
    }
    EXPECT_GT(checked, 9900);
  }
}

TEST(Triangulate, CoversAreaAndUsesAllVertices) {
  for (const Ring& r : test_polygons()) {
    const auto tris = triangulate(r);
    EXPECT_EQ(tris.size(), r.size() - 2);
    double area = 0.0;
    for (const auto& t : tris) {
      const Ring tri{r[t[0]], r[t[1]], r[t[2]]};
      EXPECT_GT(signed_area2(tri), 0.0);
      area += signed_area2(tri) / 2;
    }
    EXPECT_NEAR(area, polygon_area(r), 1e-9 * area);
  }
}

TEST(Triangulate, CollinearVerticesKept) {
  const Ring r{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {0, 1}};
  EXPECT_EQ(triangulate(r).size(), 3u);
}

TEST(ValidateSubdivision, DisjointSquaresPass) {
  PlanarSubdivision s{Plane::kPlanXY, {{1, "a", rect(0, 0, 1, 1), {}}, {2, "b", rect(2, 0, 3, 1), {}}}};
  EXPECT_TRUE(validate_subdivision(s).empty());
}

TEST(ValidateSubdivision, SharedEdgesPermitted) {
  PlanarSubdivision s{Plane::kPlanXY, {{1, "a", rect(0, 0, 1, 1), {}}, {2, "b", rect(1, 0, 2, 1), {}}}};
  EXPECT_TRUE(validate_subdivision(s).empty());
}

TEST(ValidateSubdivision, OverlapNamesBothUnits) {
  PlanarSubdivision s{Plane::kPlanXY, {{1, "a", rect(0, 0, 2, 2), {}}, {2, "b", rect(1, 1, 3, 3), {}}}};
  const auto d = validate_subdivision(s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, Violation::kInteriorOverlap);
  EXPECT_EQ(d[0].unit_ids, (std::vector<int>{1, 2}));
}

TEST(ValidateSubdivision, ContainmentIsOverlap) {
  PlanarSubdivision s{Plane::kPlanXY, {{1, "a", rect(0, 0, 4, 4), {}}, {2, "b", rect(1, 1, 2, 2), {}}}};
  const auto d = validate_subdivision(s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, Violation::kInteriorOverlap);
}

TEST(ValidateSubdivision, IdenticalUnitsOverlap) {
  PlanarSubdivision s{Plane::kPlanXY, {{1, "a", rect(0, 0, 1, 1), {}}, {2, "b", rect(0, 0, 1, 1), {}}}};
  const auto d = validate_subdivision(s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, Violation::kInteriorOverlap);
}

TEST(ValidateSubdivision, ClockwiseIsAutoFixable) {
  Ring cw = rect(0, 0, 1, 1);
  std::reverse(cw.begin(), cw.end());
  PlanarSubdivision s{Plane::kPlanXY, {{1, "a", cw, {}}}};
  const auto d = validate_subdivision(s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, Violation::kClockwise);
  EXPECT_TRUE(d[0].auto_fixable);
  const auto warnings = normalize_orientation(s);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_TRUE(validate_subdivision(s).empty());
}

TEST(ValidateSubdivision, OtherViolations) {
  auto kinds = [](const PlanarSubdivision& s) {
    std::vector<Violation> k;
    for (const auto& d : validate_subdivision(s)) k.push_back(d.kind);
    return k;
  };
  EXPECT_EQ(kinds({Plane::kPlanXY, {}}), std::vector<Violation>{Violation::kNoUnits});
  EXPECT_EQ(kinds({Plane::kPlanXY, {{1, "", {{0, 0}, {1, 0}}, {}}}}),
            std::vector<Violation>{Violation::kTooFewVertices});
  EXPECT_EQ(kinds({Plane::kPlanXY, {{1, "", {{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {}}}}),
            std::vector<Violation>{Violation::kSelfIntersection});
  EXPECT_EQ(kinds({Plane::kPlanXY, {{1, "", rect(0, 0, 1, 1), Interval{2, 1}}}}),
            std::vector<Violation>{Violation::kBadSweepInterval});
  const auto dup = kinds({Plane::kPlanXY, {{1, "", rect(0, 0, 1, 1), {}}, {1, "", rect(5, 5, 6, 6), {}}}});
  EXPECT_NE(std::find(dup.begin(), dup.end(), Violation::kDuplicateId), dup.end());
}

TEST(ValidateSubdivision, SampleDataIsValid) {
  EXPECT_TRUE(validate_subdivision(sample::plan()).empty());
  EXPECT_TRUE(validate_subdivision(sample::profile()).empty());
}

TEST(ValidateSubdivision, SampleUnitsTileMergedOutlines) {
  double plan = 0.0, profile = 0.0;
  for (const auto& u : sample::plan().units) plan += polygon_area(u.ring);
  for (const auto& u : sample::profile().units) profile += polygon_area(u.ring);
  EXPECT_NEAR(plan, polygon_area(sample::merged_footprint()), 1e-9 * plan);
  EXPECT_NEAR(profile, polygon_area(sample::merged_profile()), 1e-9 * profile);
}

TEST(DeriveHeight, MeasuredAltitudes) {
  EXPECT_EQ(derive_height(470, 425, 5), 50.0);
  EXPECT_EQ(derive_height(470, 425, 0), 45.0);
  EXPECT_EQ(code_of([] { derive_height(100, 100, 5); }), ErrorCode::kInvertedAltitude);
  EXPECT_EQ(code_of([] { derive_height(100, 200, 5); }), ErrorCode::kInvertedAltitude);
  EXPECT_THROW(derive_height(470, 425, -1), Error);
}

TEST(DeriveHeight, AdditiveInPad) {
  for (double pad : {0.0, 0.25, 1.0, 5.0, 12.5}) {
    EXPECT_EQ(derive_height(470, 425, pad), derive_height(470, 425, 0) + pad);
  }
}

TEST(BoundingBox, SampleMatchesMeasuredScale) {
  const BoundingBox b = bounding_box(sample::plan(), sample::profile());
  EXPECT_NEAR(b.length, 255.0, 0.5);
  EXPECT_NEAR(b.width, 70.0, 0.5);
  EXPECT_NEAR(b.height, 50.0, 0.5);
}

TEST(BoundingBox, ZWindowClipsProfile) {
  const BoundingBox b = bounding_box(sample::plan(), sample::profile(), Interval{425, 470});
  EXPECT_EQ(b.height, 45.0);
}

TEST(BoundingBox, UnitSquares) {
  const BoundingBox b = bounding_box({Plane::kPlanXY, {{1, "", rect(0, 0, 1, 1), {}}}},
                                     {Plane::kProfileXZ, {{1, "", rect(0, 0, 1, 1), {}}}});
  EXPECT_EQ(b.length, 1.0);
  EXPECT_EQ(b.width, 1.0);
  EXPECT_EQ(b.height, 1.0);
}

TEST(BoundingBox, UnionOfXExtents) {
  const BoundingBox b = bounding_box({Plane::kPlanXY, {{1, "", rect(0, 0, 10, 1), {}}}},
                                     {Plane::kProfileXZ, {{1, "", rect(2, 0, 5, 1), {}}}});
  EXPECT_EQ(b.length, 10.0);
}

TEST(BoundingBox, WrongPlane) {
  const PlanarSubdivision plan{Plane::kPlanXY, {{1, "", rect(0, 0, 1, 1), {}}}};
  EXPECT_EQ(code_of([&] { bounding_box(plan, plan); }), ErrorCode::kWrongPlane);
}

TEST(ClipToBand, KeepsInsidePart) {
  const Ring clipped = clip_to_band(rect(0, 0, 4, 4), 1, 3);
  const Extent2 e = extent(clipped);
  EXPECT_EQ(e.v.lo, 1.0);
  EXPECT_EQ(e.v.hi, 3.0);
  EXPECT_NEAR(std::abs(signed_area2(clipped)) / 2, 8.0, 1e-12);
}
