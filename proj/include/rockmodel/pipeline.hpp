#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rockmodel/project.hpp"
#include "rockmodel/solids.hpp"

namespace rockmodel {

inline constexpr const char* kProjectFileName = "project.yaml";
inline constexpr const char* kModelFileName = "model.json";
inline constexpr const char* kReportFileName = "report.txt";

/// Both subdivisions in the local frame, with the fixes applied on the way in
/// and whatever validation still finds.
struct LoadedInputs {
  PlanarSubdivision plan{Plane::kPlanXY, {}};
  PlanarSubdivision profile{Plane::kProfileXZ, {}};
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
};

/// Reads KML sources and inline rings. Parse failures throw with the source
/// named; geometric problems land in `errors`.
LoadedInputs load_inputs(const Project& project);

/// Plan z range [terrain - pad, max] and profile y range (plan y extent) in
/// local coordinates unless the project sets them.
SweepDefaults sweep_defaults(const Project& project, const PlanarSubdivision& plan);

struct CellRow {
  int mass_id = 0;
  int layer_id = 0;
  double volume = 0.0;
  bool watertight = false;
};

struct BuildReport {
  GeoPoint origin;
  double max_alt = 0.0;
  double terrain_alt = 0.0;
  double underground_pad = 0.0;
  double height = 0.0;
  BoundingBox box;
  std::vector<CellRow> rows;
  double total_volume = 0.0;  // sum of rows
  std::vector<std::string> warnings;
};

BuildReport make_report(const GeoModel& model, const Project& project);
std::string format_report(const BuildReport& r);
// JSON with the same content as format_report.
std::string format_report_machine(const BuildReport& r);

std::string serialize_model(const GeoModel& model);
GeoModel deserialize_model(std::string_view json);

struct InitResult {
  std::vector<std::filesystem::path> written;
};

/// Writes project.yaml and plan.kml holding the Haut-Barr sample. Refuses to
/// overwrite either file unless `force`.
InitResult cmd_init(const std::filesystem::path& dir, bool force);

struct ValidationResult {
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

ValidationResult cmd_validate(const Project& project);

struct BuildResult {
  GeoModel model;
  BuildReport report;
  std::vector<std::filesystem::path> written;
};

/// Validates, builds, then writes model.json and report.txt to the output
/// directory. Throws kValidation when validation reports errors.
BuildResult cmd_build(const Project& project);

/// Model written by the last cmd_build; throws kNoModel if there is none.
GeoModel load_built_model(const Project& project);

enum class ExportFormat { kObj, kKml, kDae, kKmlExtruded };
std::optional<ExportFormat> parse_export_format(std::string_view name);

struct ExportResult {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
};

ExportResult cmd_export(const Project& project, ExportFormat format);

/// Report text for the built model (`machine` selects JSON).
std::string cmd_report(const Project& project, bool machine);

}  // namespace rockmodel
