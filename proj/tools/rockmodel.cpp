// rockmodel: build geolocated rock-mass models from traced plan and profile
// outlines.

#include <CLI11.hpp>

#include <iostream>

#include "rockmodel/errors.hpp"
#include "rockmodel/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  namespace rm = rockmodel;

  CLI::App app{"Geolocated rock-mass models from plan and profile wireframes"};
  app.require_subcommand(1);

  std::string project_path = rm::kProjectFileName;
  app.add_option("--project", project_path, "Project file")->capture_default_str();

  auto* init = app.add_subcommand("init", "Write a sample project into a directory");
  std::string init_dir = ".";
  bool force = false;
  init->add_option("dir", init_dir, "Target directory")->capture_default_str();
  init->add_flag("--force", force, "Overwrite existing files");

  auto* validate = app.add_subcommand("validate", "Check both subdivisions");
  auto* build = app.add_subcommand("build", "Build the model and write the report");

  auto* exp = app.add_subcommand("export", "Export the built model");
  std::string format;
  exp->add_option("--format", format, "obj | kml | dae | kml-extruded")->required();

  auto* report = app.add_subcommand("report", "Print the report of the built model");
  bool machine = false;
  report->add_flag("--machine", machine, "JSON output");

  // --project is accepted after the subcommand as well.
  for (CLI::App* sub : {validate, build, exp, report}) {
    sub->add_option("--project", project_path, "Project file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*init) {
      for (const auto& p : rm::cmd_init(init_dir, force).written) {
        std::cout << "wrote " << p.string() << "\n";
      }
      return kExitOk;
    }

    const rm::Project project = rm::load_project(project_path);

    if (*validate) {
      const rm::ValidationResult r = rm::cmd_validate(project);
      print_warnings(r.warnings);
      for (const std::string& e : r.errors) std::cerr << "error: " << e << "\n";
      if (!r.ok()) return kExitFailure;
      std::cout << "ok\n";
      return kExitOk;
    }
    if (*build) {
      const rm::BuildResult r = rm::cmd_build(project);
      print_warnings(r.report.warnings);
      std::cout << rm::format_report(r.report);
      return kExitOk;
    }
    if (*exp) {
      const auto fmt = rm::parse_export_format(format);
      if (!fmt) {
        std::cerr << "error: unknown export format '" << format
                  << "' (expected obj, kml, dae or kml-extruded)\n";
        return kExitUsage;
      }
      const rm::ExportResult r = rm::cmd_export(project, *fmt);
      print_warnings(r.warnings);
      for (const auto& p : r.written) std::cout << "wrote " << p.string() << "\n";
      return kExitOk;
    }
    if (*report) {
      std::cout << rm::cmd_report(project, machine);
      return kExitOk;
    }
  } catch (const rm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == rm::ErrorCode::kUsage ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
