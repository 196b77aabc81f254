#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rockmodel/geo_frame.hpp"
#include "rockmodel/kml_io.hpp"
#include "rockmodel/wireframe.hpp"

namespace rockmodel {

// Overrides output_dir from the project file when set.
inline constexpr const char* kOutputDirEnv = "ROCKMODEL_OUTPUT_DIR";

// A subdivision is read either from a KML file of traced outlines or from
// rings written inline in the project file.
struct SubdivisionSource {
  std::optional<std::filesystem::path> kml;
  std::vector<UnitRegion> units;
};

struct Project {
  std::filesystem::path path;  // the project file itself
  GeoPoint frame_origin;
  SubdivisionSource plan;
  SubdivisionSource profile;
  // Geodetic meters, as read off the viewer.
  double max_alt = 0.0;
  double terrain_alt = 0.0;
  double underground_pad = 0.0;
  double profile_x_offset = 0.0;
  // Local-frame sweep ranges; derived from the altitudes and the plan when unset.
  std::optional<Interval> plan_z;
  std::optional<Interval> profile_y;
  Palette palette;
  std::filesystem::path output_dir = "output";

  std::filesystem::path base_dir() const { return path.parent_path(); }
  std::filesystem::path resolve(const std::filesystem::path& p) const;
  // Honors kOutputDirEnv.
  std::filesystem::path resolved_output_dir() const;
};

/// Throws kProject on YAML errors, unknown keys, missing fields or malformed
/// values. `project_path` anchors relative paths.
Project parse_project(std::string_view yaml, const std::filesystem::path& project_path);
Project load_project(const std::filesystem::path& project_path);

/// Commented YAML that parse_project reads back to an equal project.
std::string render_project(const Project& p);

}  // namespace rockmodel
