#include "rockmodel/pipeline.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "rockmodel/errors.hpp"
#include "rockmodel/kml_io.hpp"
#include "rockmodel/sample.hpp"
#include "text_format.hpp"

namespace rockmodel {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
}

PlanarSubdivision read_source(const Project& project, const SubdivisionSource& src, Plane plane,
                              const std::string& label, std::vector<std::string>& warnings) {
  PlanarSubdivision s{plane, {}};
  if (!src.kml) {
    s.units = src.units;
    for (std::string& w : normalize_orientation(s)) warnings.push_back(label + ": " + w);
    return s;
  }
  const fs::path path = project.resolve(*src.kml);
  const LocalFrame frame(project.frame_origin);
  std::vector<KmlPlacemark> placemarks;
  try {
    placemarks = parse_kml(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), label + " (" + path.string() + "): " + e.what());
  }
  int id = 0;
  for (const KmlPlacemark& p : placemarks) {
    if (p.kind == GeometryKind::kPoint) {
      warnings.push_back(label + ": skipping point placemark '" + p.name + "'");
      continue;
    }
    std::vector<std::string> fixes;
    try {
      s.units.push_back(placemark_to_unit(p, frame, plane, ++id, &fixes));
    } catch (const Error& e) {
      throw Error(e.code(), label + " (" + path.string() + "): " + e.what());
    }
    for (std::string& w : fixes) warnings.push_back(label + ": " + w);
  }
  return s;
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string one_decimal(double v) { return detail::fixed(v, 1); }

json point_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

}  // namespace

LoadedInputs load_inputs(const Project& project) {
  LoadedInputs in;
  in.plan = read_source(project, project.plan, Plane::kPlanXY, "plan", in.warnings);
  in.profile = read_source(project, project.profile, Plane::kProfileXZ, "profile", in.warnings);
  if (project.profile_x_offset != 0.0) {
    for (UnitRegion& u : in.profile.units) {
      for (Point2& v : u.ring) v.u += project.profile_x_offset;
    }
  }
  for (const Diagnostic& d : validate_subdivision(in.plan)) in.errors.push_back("plan: " + d.message);
  for (const Diagnostic& d : validate_subdivision(in.profile)) {
    in.errors.push_back("profile: " + d.message);
  }
  return in;
}

SweepDefaults sweep_defaults(const Project& project, const PlanarSubdivision& plan) {
  SweepDefaults d;
  const double up = project.frame_origin.alt;
  d.plan_z = project.plan_z.value_or(
      Interval{project.terrain_alt - project.underground_pad - up, project.max_alt - up});
  if (project.profile_y) {
    d.profile_y = *project.profile_y;
  } else {
    d.profile_y = extent(plan).v;
  }
  return d;
}

BuildReport make_report(const GeoModel& model, const Project& project) {
  BuildReport r;
  r.origin = model.frame.origin();
  r.max_alt = project.max_alt;
  r.terrain_alt = project.terrain_alt;
  r.underground_pad = project.underground_pad;
  r.height = derive_height(project.max_alt, project.terrain_alt, project.underground_pad);
  r.box = model.box;
  r.warnings = model.warnings;
  for (const ModelCell& c : model.cells) {
    const bool closed = is_watertight(c.mesh);
    const double volume = closed ? mesh_volume(c.mesh) : 0.0;
    r.rows.push_back({c.mass_id, c.layer_id, volume, closed});
    r.total_volume += volume;
  }
  if (model.cells.empty()) r.warnings.push_back("model has no cells");
  return r;
}

std::string format_report(const BuildReport& r) {
  std::ostringstream out;
  out << "rockmodel build report\n"
      << "frame origin: lat " << detail::fixed(r.origin.lat, 7) << ", lon "
      << detail::fixed(r.origin.lon, 7) << ", alt " << one_decimal(r.origin.alt) << " m\n"
      << "altitudes: max " << one_decimal(r.max_alt) << " m, terrain "
      << one_decimal(r.terrain_alt) << " m, underground pad " << one_decimal(r.underground_pad)
      << " m\n"
      << "height: " << one_decimal(r.height) << " m\n"
      << "box: " << one_decimal(r.box.length) << " x " << one_decimal(r.box.width) << " x "
      << one_decimal(r.box.height) << " m\n\n";
  out << "mass  layer      volume (m3)  watertight\n";
  std::size_t closed = 0;
  for (const CellRow& row : r.rows) {
    out << pad_left(std::to_string(row.mass_id), 4) << "  " << pad_left(std::to_string(row.layer_id), 5)
        << "  " << pad_left(detail::fixed(row.volume, 3), 15) << "  "
        << (row.watertight ? "yes" : "no") << "\n";
    closed += row.watertight ? 1 : 0;
  }
  out << "total" << pad_left(detail::fixed(r.total_volume, 3), 23) << "  " << closed << "/"
      << r.rows.size() << "\n";
  if (r.warnings.empty()) {
    out << "warnings: none\n";
  } else {
    out << "warnings:\n";
    for (const std::string& w : r.warnings) out << "  - " << w << "\n";
  }
  return out.str();
}

std::string format_report_machine(const BuildReport& r) {
  json rows = json::array();
  std::size_t closed = 0;
  for (const CellRow& row : r.rows) {
    rows.push_back({{"mass_id", row.mass_id},
                    {"layer_id", row.layer_id},
                    {"volume", row.volume},
                    {"watertight", row.watertight}});
    closed += row.watertight ? 1 : 0;
  }
  json doc = {
      {"frame_origin", {{"lat", r.origin.lat}, {"lon", r.origin.lon}, {"alt", r.origin.alt}}},
      {"altitudes",
       {{"max_alt", r.max_alt},
        {"terrain_alt", r.terrain_alt},
        {"underground_pad", r.underground_pad},
        {"height", r.height}}},
      {"box", {{"length", r.box.length}, {"width", r.box.width}, {"height", r.box.height}}},
      {"cells", rows},
      {"totals", {{"cells", r.rows.size()}, {"watertight", closed}, {"volume", r.total_volume}}},
      {"warnings", r.warnings},
  };
  return doc.dump(2) + "\n";
}

std::string serialize_model(const GeoModel& model) {
  const GeoPoint& o = model.frame.origin();
  json cells = json::array();
  for (const ModelCell& c : model.cells) {
    json vertices = json::array();
    for (const Point3& p : c.mesh.vertices) vertices.push_back(point_json(p));
    json triangles = json::array();
    for (const Triangle& t : c.mesh.triangles) triangles.push_back(json::array({t[0], t[1], t[2]}));
    cells.push_back({{"mass_id", c.mass_id},
                     {"layer_id", c.layer_id},
                     {"vertices", std::move(vertices)},
                     {"triangles", std::move(triangles)}});
  }
  json doc = {
      {"format", "rockmodel-model"},
      {"version", 1},
      {"frame_origin", {{"lat", o.lat}, {"lon", o.lon}, {"alt", o.alt}}},
      {"box", {{"length", model.box.length}, {"width", model.box.width}, {"height", model.box.height}}},
      {"warnings", model.warnings},
      {"cells", std::move(cells)},
  };
  return doc.dump() + "\n";
}

GeoModel deserialize_model(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "rockmodel-model" || doc.at("version") != 1) {
      throw Error(ErrorCode::kNoModel, "not a rockmodel model file");
    }
    const json& o = doc.at("frame_origin");
    GeoModel m{LocalFrame(GeoPoint{o.at("lat"), o.at("lon"), o.at("alt")}), {}, {}, {}};
    const json& box = doc.at("box");
    m.box = {box.at("length"), box.at("width"), box.at("height")};
    m.warnings = doc.at("warnings").get<std::vector<std::string>>();
    for (const json& c : doc.at("cells")) {
      ModelCell cell;
      cell.mass_id = c.at("mass_id");
      cell.layer_id = c.at("layer_id");
      for (const json& v : c.at("vertices")) cell.mesh.vertices.push_back({v.at(0), v.at(1), v.at(2)});
      for (const json& t : c.at("triangles")) cell.mesh.triangles.push_back({t.at(0), t.at(1), t.at(2)});
      cell.mesh.tag = CellTag{cell.mass_id, cell.layer_id};
      m.cells.push_back(std::move(cell));
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kNoModel, std::string("corrupt model file: ") + e.what());
  }
}

InitResult cmd_init(const fs::path& dir, bool force) {
  const fs::path project_file = dir / kProjectFileName;
  const fs::path plan_file = dir / "plan.kml";
  if (!force) {
    for (const fs::path& p : {project_file, plan_file}) {
      if (fs::exists(p)) {
        throw Error(ErrorCode::kIo, p.string() + " already exists; use --force to overwrite");
      }
    }
  }
  ensure_dir(dir);

  Project p;
  p.path = project_file;
  p.frame_origin = sample::origin();
  p.plan.kml = "plan.kml";
  p.profile.units = sample::profile().units;
  p.max_alt = sample::kMaxAlt;
  p.terrain_alt = sample::kTerrainAlt;
  p.underground_pad = sample::kUndergroundPad;
  p.palette = sample::palette();
  p.output_dir = "output";

  const std::string plan_kml = write_kml_paths(sample::plan(), LocalFrame(p.frame_origin));
  write_file(plan_file, plan_kml);
  write_file(project_file, render_project(p));
  return {{project_file, plan_file}};
}

ValidationResult cmd_validate(const Project& project) {
  LoadedInputs in = load_inputs(project);
  ValidationResult r{std::move(in.warnings), std::move(in.errors)};
  try {
    derive_height(project.max_alt, project.terrain_alt, project.underground_pad);
  } catch (const Error& e) {
    r.errors.push_back(std::string("altitudes: ") + e.what());
  }
  return r;
}

BuildResult cmd_build(const Project& project) {
  LoadedInputs in = load_inputs(project);
  if (!in.errors.empty()) {
    std::string msg = "validation failed:";
    for (const std::string& e : in.errors) msg += "\n  " + e;
    throw Error(ErrorCode::kValidation, msg);
  }
  derive_height(project.max_alt, project.terrain_alt, project.underground_pad);

  BuildResult r;
  r.model = build_model(in.plan, in.profile, sweep_defaults(project, in.plan),
                        LocalFrame(project.frame_origin));
  r.model.warnings.insert(r.model.warnings.begin(), in.warnings.begin(), in.warnings.end());
  r.report = make_report(r.model, project);

  const fs::path out = project.resolved_output_dir();
  ensure_dir(out);
  write_file(out / kModelFileName, serialize_model(r.model));
  write_file(out / kReportFileName, format_report(r.report));
  r.written = {out / kModelFileName, out / kReportFileName};
  return r;
}

GeoModel load_built_model(const Project& project) {
  const fs::path path = project.resolved_output_dir() / kModelFileName;
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kNoModel,
                "no built model at " + path.string() + "; run `rockmodel build` first");
  }
  return deserialize_model(read_file(path));
}

std::optional<ExportFormat> parse_export_format(std::string_view name) {
  if (name == "obj") return ExportFormat::kObj;
  if (name == "kml") return ExportFormat::kKml;
  if (name == "dae") return ExportFormat::kDae;
  if (name == "kml-extruded") return ExportFormat::kKmlExtruded;
  return std::nullopt;
}

ExportResult cmd_export(const Project& project, ExportFormat format) {
  const GeoModel model = load_built_model(project);
  const fs::path out = project.resolved_output_dir();
  ExportResult r;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_file(out / name, text);
    r.written.push_back(out / name);
  };
  auto take = [&](XmlDocument doc) {
    r.warnings.insert(r.warnings.end(), doc.warnings.begin(), doc.warnings.end());
    return std::move(doc.text);
  };
  switch (format) {
    case ExportFormat::kObj: {
      std::vector<TriMesh> meshes;
      for (const ModelCell& c : model.cells) meshes.push_back(c.mesh);
      emit("model.obj", export_obj(meshes));
      break;
    }
    case ExportFormat::kKml: {
      const std::string dae = take(write_collada(model, project.palette));
      const std::string kml = take(write_kml_model(model, "model.dae"));
      emit("model.kml", kml);
      emit("model.dae", dae);
      break;
    }
    case ExportFormat::kDae:
      emit("model.dae", take(write_collada(model, project.palette)));
      break;
    case ExportFormat::kKmlExtruded: {
      LoadedInputs in = load_inputs(project);
      emit("extruded.kml", write_kml_extruded(in.plan, model.frame, project.terrain_alt,
                                              project.max_alt));
      break;
    }
  }
  return r;
}

std::string cmd_report(const Project& project, bool machine) {
  const BuildReport r = make_report(load_built_model(project), project);
  return machine ? format_report_machine(r) : format_report(r);
}

}  // namespace rockmodel
