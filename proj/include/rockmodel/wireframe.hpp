#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rockmodel/geometry.hpp"

namespace rockmodel {

// Closed vertex ring; the closing edge back to the first vertex is implicit.
using Ring = std::vector<Point2>;

/// One labeled region of a planar wireframe: a rock-mass footprint in plan
/// view or a layer band in profile view.
struct UnitRegion {
  int id = 0;
  std::string name;
  Ring ring;
  // Overrides the model's default sweep interval for this unit when set.
  std::optional<Interval> sweep_interval;
};

struct PlanarSubdivision {
  Plane plane = Plane::kPlanXY;
  std::vector<UnitRegion> units;
};

struct BoundingBox {
  double length = 0.0;  // x extent
  double width = 0.0;   // y extent
  double height = 0.0;  // z extent
};

struct Extent2 {
  Interval u;
  Interval v;
};

// Twice the signed shoelace area; positive for counterclockwise rings.
double signed_area2(std::span<const Point2> ring);

bool is_simple(std::span<const Point2> ring);

/// Area of a simple ring. Throws kInvalidPolygon for self-intersecting or
/// zero-area rings.
double polygon_area(std::span<const Point2> ring);

/// Even-odd classification; points within kEpsGeom of an edge are
/// kOnBoundary.
Classification point_in_polygon(const Point2& p, std::span<const Point2> ring);

double distance_to_segment(const Point2& p, const Point2& a, const Point2& b);
double distance_to_ring(const Point2& p, std::span<const Point2> ring);

Extent2 extent(std::span<const Point2> ring);
Extent2 extent(const PlanarSubdivision& s);

/// Ear-clipping triangulation of a simple counterclockwise ring. Every ring
/// vertex is used, collinear ones included. Throws kInvalidPolygon when no
/// ear can be found.
std::vector<std::array<std::uint32_t, 3>> triangulate(std::span<const Point2> ring);

// Sutherland-Hodgman clip to lo <= v <= hi. Disconnected pieces come back
// joined by zero-width bridges along the clip lines, which is harmless for
// extent computations.
Ring clip_to_band(std::span<const Point2> ring, double lo, double hi);

enum class Violation {
  kNoUnits,
  kDuplicateId,
  kTooFewVertices,
  kNonFinite,
  kSelfIntersection,
  kZeroArea,
  kClockwise,
  kBadSweepInterval,
  kInteriorOverlap,
};

std::string_view to_string(Violation v);

struct Diagnostic {
  Violation kind;
  std::vector<int> unit_ids;
  std::vector<std::size_t> vertices;
  bool auto_fixable = false;
  std::string message;
};

/// Empty iff every unit and subdivision invariant holds.
std::vector<Diagnostic> validate_subdivision(const PlanarSubdivision& s);

/// Reverses clockwise rings in place and returns one warning per fix.
std::vector<std::string> normalize_orientation(PlanarSubdivision& s);

/// Model height from the measured altitudes: (max_alt - terrain_alt) plus the
/// underground padding. Throws kInvertedAltitude when max_alt <= terrain_alt.
double derive_height(double max_alt, double terrain_alt, double underground_pad);

/// Box enclosing both views. The two views share the x axis. When `z_window`
/// is given the profile is first clipped to it, which is what the built model
/// can occupy.
BoundingBox bounding_box(const PlanarSubdivision& plan,
                         const PlanarSubdivision& profile,
                         std::optional<Interval> z_window = std::nullopt);

}  // namespace rockmodel
