#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rockmodel/geo_frame.hpp"
#include "rockmodel/mesh.hpp"
#include "rockmodel/wireframe.hpp"

namespace rockmodel {

/// A unit region swept along the axis normal to its plane: z for plan units,
/// y for profile units.
struct ExtrudedSolid {
  UnitRegion base;
  Plane plane = Plane::kPlanXY;
  Interval interval;
};

/// Closed prism over `unit` spanning `interval` along the sweep axis. Caps are
/// ear-clipped; the mesh has exactly 2 * ring length vertices.
TriMesh extrude(const UnitRegion& unit, Plane plane, const Interval& interval);

/// Exact point classification against plan-prism AND profile-prism.
Classification membership(const UnitRegion& plan_unit, const Interval& plan_interval,
                          const UnitRegion& profile_unit,
                          const Interval& profile_interval, const Point3& p);

/// Intersection of a plan prism (swept along z) and a profile prism (swept
/// along y), meshed by an x-slab sweep. Returns nullopt when the intersection
/// has no volume. Throws kOrthogonality unless `plan` is kPlanXY and `profile`
/// is kProfileXZ.
std::optional<TriMesh> intersect_ortho(const ExtrudedSolid& plan,
                                       const ExtrudedSolid& profile);

struct SweepDefaults {
  Interval plan_z;     // plan units sweep over this z range
  Interval profile_y;  // profile units sweep over this y range
};

struct ModelCell {
  int mass_id = 0;
  int layer_id = 0;
  TriMesh mesh;
};

struct GeoModel {
  LocalFrame frame{GeoPoint{}};
  std::vector<ModelCell> cells;  // sorted by (mass_id, layer_id)
  BoundingBox box;
  std::vector<std::string> warnings;
};

/// One cell per (plan unit, profile unit) pair with a non-empty intersection.
/// Pairs are evaluated concurrently; ordering does not depend on scheduling.
/// The reported box clips the profile to `defaults.plan_z`.
GeoModel build_model(const PlanarSubdivision& plan, const PlanarSubdivision& profile,
                     const SweepDefaults& defaults, const LocalFrame& frame);

inline constexpr std::uint64_t kDefaultVoxelCap = 100'000'000;

// Brute-force reference volume: voxel centers classified kInside by
// membership(), times resolution^3. Error is O(surface area * resolution).
double voxel_volume(const UnitRegion& plan_unit, const Interval& plan_interval,
                    const UnitRegion& profile_unit, const Interval& profile_interval,
                    double resolution, std::uint64_t max_voxels = kDefaultVoxelCap);

}  // namespace rockmodel
