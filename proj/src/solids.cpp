#include "rockmodel/solids.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "rockmodel/errors.hpp"

namespace rockmodel {

namespace {

void check_interval(const Interval& iv, const char* what) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi)) {
    throw Error(ErrorCode::kEmptyInterval,
                std::string(what) + " interval must satisfy lo < hi");
  }
}

// Copy of the ring in counterclockwise order; rejects invalid rings.
Ring ccw_ring(const UnitRegion& unit) {
  polygon_area(unit.ring);
  Ring r = unit.ring;
  if (signed_area2(r) < 0.0) std::reverse(r.begin(), r.end());
  return r;
}

Classification classify_interval(double t, const Interval& iv) {
  if (t < iv.lo - kEpsGeom || t > iv.hi + kEpsGeom) return Classification::kOutside;
  if (t <= iv.lo + kEpsGeom || t >= iv.hi - kEpsGeom) return Classification::kOnBoundary;
  return Classification::kInside;
}

Classification conjunction(std::initializer_list<Classification> parts) {
  bool boundary = false;
  for (Classification c : parts) {
    if (c == Classification::kOutside) return Classification::kOutside;
    boundary = boundary || c == Classification::kOnBoundary;
  }
  return boundary ? Classification::kOnBoundary : Classification::kInside;
}

// ---------------------------------------------------------------------------
// Slab sweep.
//
// Inside one x-slab the plan cross-section is a set of y-bands and the profile
// cross-section a set of z-bands, each band bounded by two polygon edges and
// therefore linear in x. Every (y-band, z-band) product is a cell with two
// x-faces and four planar side faces. Values on each slab boundary plane are
// snapped to a shared grid so that cells on both sides of a plane reference
// identical vertices; the x-faces are emitted only where exactly one side
// covers a grid rectangle.

// Non-vertical polygon edge with a.u < b.u.
struct SweepEdge {
  Point2 a;
  Point2 b;

  double at(double x) const {
    if (x <= a.u) return a.v;
    if (x >= b.u) return b.v;
    return a.v + (b.v - a.v) * ((x - a.u) / (b.u - a.u));
  }
};

std::vector<SweepEdge> sweep_edges(const Ring& ring) {
  std::vector<SweepEdge> out;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    Point2 a = ring[i];
    Point2 b = ring[(i + 1) % ring.size()];
    if (a.u == b.u) continue;
    if (a.u > b.u) std::swap(a, b);
    out.push_back({a, b});
  }
  return out;
}

// Band values at the slab's left (0) and right (1) boundary.
struct Band {
  double lo0, hi0, lo1, hi1;
};

std::vector<Band> cross_section(const std::vector<SweepEdge>& edges, double x0,
                                double x1, const Interval& clamp) {
  const double xm = 0.5 * (x0 + x1);
  std::vector<std::pair<double, const SweepEdge*>> active;
  for (const SweepEdge& e : edges) {
    if (e.a.u < xm && xm < e.b.u) active.push_back({e.at(xm), &e});
  }
  std::sort(active.begin(), active.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  std::vector<Band> bands;
  auto cl = [&](double t) { return std::clamp(t, clamp.lo, clamp.hi); };
  for (std::size_t i = 0; i + 1 < active.size(); i += 2) {
    const SweepEdge& lo = *active[i].second;
    const SweepEdge& hi = *active[i + 1].second;
    Band b{cl(lo.at(x0)), cl(hi.at(x0)), cl(lo.at(x1)), cl(hi.at(x1))};
    if (b.hi0 - b.lo0 <= kEpsGeom && b.hi1 - b.lo1 <= kEpsGeom) continue;
    bands.push_back(b);
  }
  return bands;
}

// Sorted values merged into clusters no wider than kEpsGeom; each cluster is
// represented by its smallest member.
class SnapGrid {
 public:
  explicit SnapGrid(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    for (double v : values) {
      if (starts_.empty() || v - starts_.back() > kEpsGeom) starts_.push_back(v);
    }
  }

  int index(double v) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), v);
    return static_cast<int>(it - starts_.begin()) - 1;
  }

  double value(int i) const { return starts_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(starts_.size()); }

 private:
  std::vector<double> starts_;
};

struct Cell {
  Band y;
  Band z;
  // Grid indices at the left (0) and right (1) planes of the slab.
  int ylo0 = 0, yhi0 = 0, zlo0 = 0, zhi0 = 0;
  int ylo1 = 0, yhi1 = 0, zlo1 = 0, zhi1 = 0;
};

class SlabMesher {
 public:
  explicit SlabMesher(std::vector<double> xs) : xs_(std::move(xs)), slabs_(xs_.size() - 1) {}

  std::vector<std::vector<Cell>>& slabs() { return slabs_; }

  TriMesh run() {
    const std::size_t np = xs_.size();
    grids_.reserve(np);
    for (std::size_t k = 0; k < np; ++k) {
      std::vector<double> ys, zs;
      if (k > 0) {
        for (const Cell& c : slabs_[k - 1]) {
          ys.insert(ys.end(), {c.y.lo1, c.y.hi1});
          zs.insert(zs.end(), {c.z.lo1, c.z.hi1});
        }
      }
      if (k + 1 < np) {
        for (const Cell& c : slabs_[k]) {
          ys.insert(ys.end(), {c.y.lo0, c.y.hi0});
          zs.insert(zs.end(), {c.z.lo0, c.z.hi0});
        }
      }
      grids_.push_back({SnapGrid(std::move(ys)), SnapGrid(std::move(zs))});
    }
    for (std::size_t s = 0; s + 1 < np; ++s) {
      for (Cell& c : slabs_[s]) {
        const auto& g0 = grids_[s];
        const auto& g1 = grids_[s + 1];
        c.ylo0 = g0.first.index(c.y.lo0);
        c.yhi0 = g0.first.index(c.y.hi0);
        c.zlo0 = g0.second.index(c.z.lo0);
        c.zhi0 = g0.second.index(c.z.hi0);
        c.ylo1 = g1.first.index(c.y.lo1);
        c.yhi1 = g1.first.index(c.y.hi1);
        c.zlo1 = g1.second.index(c.z.lo1);
        c.zhi1 = g1.second.index(c.z.hi1);
      }
    }

    for (std::size_t s = 0; s + 1 < np; ++s) {
      for (const Cell& c : slabs_[s]) emit_sides(s, c);
    }
    for (std::size_t k = 0; k < np; ++k) emit_plane(k);

    TriMesh mesh;
    mesh.vertices = std::move(vertices_);
    mesh.triangles = std::move(triangles_);
    return mesh;
  }

 private:
  std::uint32_t vertex(std::size_t plane, int yi, int zi) {
    const auto key = std::make_tuple(plane, yi, zi);
    auto [it, fresh] = ids_.try_emplace(key, static_cast<std::uint32_t>(vertices_.size()));
    if (fresh) {
      vertices_.push_back({xs_[plane], grids_[plane].first.value(yi),
                           grids_[plane].second.value(zi)});
    }
    return it->second;
  }

  // Appends the triangle with the winding whose normal points along
  // `axis` (0 = x, 1 = y, 2 = z) in the direction of `sign`.
  void add(std::uint32_t a, std::uint32_t b, std::uint32_t c, int axis, double sign) {
    const Point3 n = cross(vertices_[b] - vertices_[a], vertices_[c] - vertices_[a]);
    const double comp = axis == 0 ? n.x : (axis == 1 ? n.y : n.z);
    if (comp * sign < 0.0) std::swap(b, c);
    triangles_.push_back({a, b, c});
  }

  // Triangulates the strip between two chains of points on the slab's left
  // and right planes, advancing whichever chain has the smaller next value.
  void zipper(const std::vector<std::uint32_t>& left, const std::vector<double>& lt,
              const std::vector<std::uint32_t>& right, const std::vector<double>& rt,
              int axis, double sign) {
    std::size_t i = 0, j = 0;
    while (i + 1 < left.size() || j + 1 < right.size()) {
      if (i + 1 < left.size() && (j + 1 == right.size() || lt[i + 1] <= rt[j + 1])) {
        add(left[i], left[i + 1], right[j], axis, sign);
        ++i;
      } else {
        add(left[i], right[j + 1], right[j], axis, sign);
        ++j;
      }
    }
  }

  // Points along a cell edge lying in plane k: fixed index on one grid axis,
  // running index over [from, to] on the other.
  void chain(std::size_t k, bool fixed_is_y, int fixed, int from, int to,
             std::vector<std::uint32_t>& ids, std::vector<double>& ts) {
    ids.clear();
    ts.clear();
    for (int i = from; i <= to; ++i) {
      ids.push_back(fixed_is_y ? vertex(k, fixed, i) : vertex(k, i, fixed));
      ts.push_back(fixed_is_y ? grids_[k].second.value(i) : grids_[k].first.value(i));
    }
  }

  void emit_sides(std::size_t s, const Cell& c) {
    std::vector<std::uint32_t> a, b;
    std::vector<double> at, bt;
    // y = lo / y = hi walls run over z.
    chain(s, true, c.ylo0, c.zlo0, c.zhi0, a, at);
    chain(s + 1, true, c.ylo1, c.zlo1, c.zhi1, b, bt);
    zipper(a, at, b, bt, 1, -1.0);
    chain(s, true, c.yhi0, c.zlo0, c.zhi0, a, at);
    chain(s + 1, true, c.yhi1, c.zlo1, c.zhi1, b, bt);
    zipper(a, at, b, bt, 1, +1.0);
    // z = lo / z = hi walls run over y.
    chain(s, false, c.zlo0, c.ylo0, c.yhi0, a, at);
    chain(s + 1, false, c.zlo1, c.ylo1, c.yhi1, b, bt);
    zipper(a, at, b, bt, 2, -1.0);
    chain(s, false, c.zhi0, c.ylo0, c.yhi0, a, at);
    chain(s + 1, false, c.zhi1, c.ylo1, c.yhi1, b, bt);
    zipper(a, at, b, bt, 2, +1.0);
  }

  void emit_plane(std::size_t k) {
    const int ny = grids_[k].first.size();
    const int nz = grids_[k].second.size();
    if (ny < 2 || nz < 2) return;
    auto covered = [&](const std::vector<Cell>& cells, bool right_end, int i, int j) {
      for (const Cell& c : cells) {
        const int ylo = right_end ? c.ylo1 : c.ylo0, yhi = right_end ? c.yhi1 : c.yhi0;
        const int zlo = right_end ? c.zlo1 : c.zlo0, zhi = right_end ? c.zhi1 : c.zhi0;
        if (ylo <= i && i + 1 <= yhi && zlo <= j && j + 1 <= zhi) return true;
      }
      return false;
    };
    for (int i = 0; i + 1 < ny; ++i) {
      for (int j = 0; j + 1 < nz; ++j) {
        const bool left = k > 0 && covered(slabs_[k - 1], true, i, j);
        const bool right = k + 1 < xs_.size() && covered(slabs_[k], false, i, j);
        if (left == right) continue;
        const double sign = left ? +1.0 : -1.0;
        const std::uint32_t p00 = vertex(k, i, j), p10 = vertex(k, i + 1, j);
        const std::uint32_t p11 = vertex(k, i + 1, j + 1), p01 = vertex(k, i, j + 1);
        add(p00, p10, p11, 0, sign);
        add(p00, p11, p01, 0, sign);
      }
    }
  }

  std::vector<double> xs_;
  std::vector<std::vector<Cell>> slabs_;
  std::vector<std::pair<SnapGrid, SnapGrid>> grids_;
  std::map<std::tuple<std::size_t, int, int>, std::uint32_t> ids_;
  std::vector<Point3> vertices_;
  std::vector<Triangle> triangles_;
};

void add_band_crossings(const Ring& ring, const Interval& band, std::vector<double>& xs) {
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % ring.size()];
    for (double level : {band.lo, band.hi}) {
      if ((a.v - level) * (b.v - level) < 0.0) {
        xs.push_back(a.u + (level - a.v) * (b.u - a.u) / (b.v - a.v));
      }
    }
  }
}

}  // namespace

TriMesh extrude(const UnitRegion& unit, Plane plane, const Interval& interval) {
  check_interval(interval, "extrusion");
  const Ring ring = ccw_ring(unit);
  const auto caps = triangulate(ring);
  const auto n = static_cast<std::uint32_t>(ring.size());

  // Build as a prism along w over (u, v), then map to model axes.
  TriMesh m;
  m.vertices.reserve(2 * n);
  auto place = [&](const Point2& p, double w) -> Point3 {
    return plane == Plane::kPlanXY ? Point3{p.u, p.v, w} : Point3{p.u, w, p.v};
  };
  for (const Point2& p : ring) m.vertices.push_back(place(p, interval.lo));
  for (const Point2& p : ring) m.vertices.push_back(place(p, interval.hi));
  for (const auto& t : caps) {
    m.triangles.push_back({t[0], t[2], t[1]});
    m.triangles.push_back({n + t[0], n + t[1], n + t[2]});
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t j = (i + 1) % n;
    m.triangles.push_back({i, j, n + j});
    m.triangles.push_back({i, n + j, n + i});
  }
  // (u, v, w) -> (x, z, y) swaps two axes and so reverses orientation.
  if (plane == Plane::kProfileXZ) flip_winding(m);
  return m;
}

Classification membership(const UnitRegion& plan_unit, const Interval& plan_interval,
                          const UnitRegion& profile_unit,
                          const Interval& profile_interval, const Point3& p) {
  return conjunction({point_in_polygon({p.x, p.y}, plan_unit.ring),
                      classify_interval(p.z, plan_interval),
                      point_in_polygon({p.x, p.z}, profile_unit.ring),
                      classify_interval(p.y, profile_interval)});
}

std::optional<TriMesh> intersect_ortho(const ExtrudedSolid& plan,
                                       const ExtrudedSolid& profile) {
  if (plan.plane != Plane::kPlanXY || profile.plane != Plane::kProfileXZ) {
    throw Error(ErrorCode::kOrthogonality,
                "intersect_ortho needs one plan (z-swept) and one profile (y-swept) solid");
  }
  check_interval(plan.interval, "plan");
  check_interval(profile.interval, "profile");
  const Ring p = ccw_ring(plan.base);
  const Ring q = ccw_ring(profile.base);

  const Extent2 pe = extent(p), qe = extent(q);
  const double x_lo = std::max(pe.u.lo, qe.u.lo);
  const double x_hi = std::min(pe.u.hi, qe.u.hi);
  if (x_hi - x_lo <= kEpsGeom) return std::nullopt;
  // The y-bands live inside the profile's sweep and the z-bands inside the
  // plan's sweep.
  const Interval y_clamp = profile.interval;
  const Interval z_clamp = plan.interval;
  if (std::min(pe.v.hi, y_clamp.hi) - std::max(pe.v.lo, y_clamp.lo) <= kEpsGeom ||
      std::min(qe.v.hi, z_clamp.hi) - std::max(qe.v.lo, z_clamp.lo) <= kEpsGeom) {
    return std::nullopt;
  }

  std::vector<double> xs;
  for (const Point2& v : p) xs.push_back(v.u);
  for (const Point2& v : q) xs.push_back(v.u);
  add_band_crossings(p, y_clamp, xs);
  add_band_crossings(q, z_clamp, xs);
  std::sort(xs.begin(), xs.end());
  std::vector<double> breaks;
  for (double x : xs) {
    if (x < x_lo || x > x_hi) continue;
    if (breaks.empty() || x - breaks.back() > kEpsGeom) breaks.push_back(x);
  }
  if (breaks.size() < 2) return std::nullopt;

  const auto pe_edges = sweep_edges(p);
  const auto qe_edges = sweep_edges(q);
  SlabMesher mesher(breaks);
  bool any = false;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const auto ys = cross_section(pe_edges, breaks[s], breaks[s + 1], y_clamp);
    const auto zs = cross_section(qe_edges, breaks[s], breaks[s + 1], z_clamp);
    for (const Band& yb : ys) {
      for (const Band& zb : zs) {
        Cell c;
        c.y = yb;
        c.z = zb;
        mesher.slabs()[s].push_back(c);
        any = true;
      }
    }
  }
  if (!any) return std::nullopt;

  TriMesh mesh = mesher.run();
  split_pinched_vertices(mesh);
  const WatertightReport report = check_watertight(mesh);
  if (!report) {
    throw Error(ErrorCode::kOpenMesh,
                "slab sweep produced a mesh with " + std::to_string(report.problems.size()) +
                    " open or inconsistent edges");
  }
  return mesh;
}

GeoModel build_model(const PlanarSubdivision& plan, const PlanarSubdivision& profile,
                     const SweepDefaults& defaults, const LocalFrame& frame) {
  if (plan.plane != Plane::kPlanXY || profile.plane != Plane::kProfileXZ) {
    throw Error(ErrorCode::kWrongPlane,
                "build_model expects a plan (XY) and a profile (XZ) subdivision");
  }
  check_interval(defaults.plan_z, "plan sweep");
  check_interval(defaults.profile_y, "profile sweep");
  for (const PlanarSubdivision* s : {&plan, &profile}) {
    const auto diags = validate_subdivision(*s);
    if (!diags.empty()) {
      std::string msg = s == &plan ? "plan subdivision is invalid:" : "profile subdivision is invalid:";
      for (const Diagnostic& d : diags) msg += "\n  " + d.message;
      throw Error(ErrorCode::kValidation, msg);
    }
  }

  struct Job {
    const UnitRegion* mass;
    const UnitRegion* layer;
  };
  std::vector<Job> jobs;
  for (const UnitRegion& m : plan.units) {
    for (const UnitRegion& l : profile.units) jobs.push_back({&m, &l});
  }
  std::vector<std::optional<TriMesh>> results(jobs.size());
  std::vector<std::string> errors(jobs.size());

  auto run = [&](std::size_t i) {
    const Job& job = jobs[i];
    try {
      ExtrudedSolid a{*job.mass, Plane::kPlanXY,
                      job.mass->sweep_interval.value_or(defaults.plan_z)};
      ExtrudedSolid b{*job.layer, Plane::kProfileXZ,
                      job.layer->sweep_interval.value_or(defaults.profile_y)};
      results[i] = intersect_ortho(a, b);
    } catch (const Error& e) {
      errors[i] = "mass " + std::to_string(job.mass->id) + " x layer " +
                  std::to_string(job.layer->id) + ": " + e.what();
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, jobs.size() ? jobs.size() : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run(i);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard lock(mu);
            if (next == jobs.size()) return;
            i = next++;
          }
          run(i);
        }
      });
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw Error(ErrorCode::kValidation, e);
  }

  GeoModel model{frame, {}, {}, {}};
  const bool overlaps_window =
      std::any_of(profile.units.begin(), profile.units.end(), [&](const UnitRegion& u) {
        return clip_to_band(u.ring, defaults.plan_z.lo, defaults.plan_z.hi).size() >= 3;
      });
  if (overlaps_window) {
    model.box = bounding_box(plan, profile, defaults.plan_z);
  } else {
    model.box = bounding_box(plan, profile);
    model.warnings.push_back(
        "profile lies entirely outside the plan z range; box uses the whole profile");
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!results[i]) continue;
    ModelCell cell{jobs[i].mass->id, jobs[i].layer->id, std::move(*results[i])};
    cell.mesh.tag = CellTag{cell.mass_id, cell.layer_id};
    if (mesh_volume(cell.mesh) <= 0.0) {
      flip_winding(cell.mesh);
      model.warnings.push_back("cell mass" + std::to_string(cell.mass_id) + "_layer" +
                               std::to_string(cell.layer_id) +
                               " had inward winding; flipped");
    }
    model.cells.push_back(std::move(cell));
  }
  std::sort(model.cells.begin(), model.cells.end(), [](const ModelCell& a, const ModelCell& b) {
    return std::tie(a.mass_id, a.layer_id) < std::tie(b.mass_id, b.layer_id);
  });
  return model;
}

double voxel_volume(const UnitRegion& plan_unit, const Interval& plan_interval,
                    const UnitRegion& profile_unit, const Interval& profile_interval,
                    double resolution, std::uint64_t max_voxels) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorCode::kValidation, "voxel resolution must be positive");
  }
  const Extent2 pe = extent(plan_unit.ring), qe = extent(profile_unit.ring);
  const Interval xr{std::max(pe.u.lo, qe.u.lo), std::min(pe.u.hi, qe.u.hi)};
  const Interval yr{std::max(pe.v.lo, profile_interval.lo),
                    std::min(pe.v.hi, profile_interval.hi)};
  const Interval zr{std::max(qe.v.lo, plan_interval.lo), std::min(qe.v.hi, plan_interval.hi)};
  if (xr.length() <= 0.0 || yr.length() <= 0.0 || zr.length() <= 0.0) return 0.0;

  const auto count = [&](const Interval& r) {
    return static_cast<std::uint64_t>(std::ceil(r.length() / resolution));
  };
  const std::uint64_t nx = count(xr), ny = count(yr), nz = count(zr);
  const long double total = static_cast<long double>(nx) * ny * nz;
  if (total > static_cast<long double>(max_voxels)) {
    throw Error(ErrorCode::kResourceLimit,
                "voxel grid of " + std::to_string(nx) + " x " + std::to_string(ny) + " x " +
                    std::to_string(nz) + " exceeds the cap of " + std::to_string(max_voxels));
  }

  // membership() is a conjunction of a plan test on (x, y) and a profile test
  // on (x, z), so per x column the Inside count factors into a product.
  std::uint64_t inside = 0;
  for (std::uint64_t i = 0; i < nx; ++i) {
    const double x = xr.lo + (static_cast<double>(i) + 0.5) * resolution;
    std::uint64_t cy = 0, cz = 0;
    for (std::uint64_t j = 0; j < ny; ++j) {
      const double y = yr.lo + (static_cast<double>(j) + 0.5) * resolution;
      cy += conjunction({point_in_polygon({x, y}, plan_unit.ring),
                         classify_interval(y, profile_interval)}) == Classification::kInside;
    }
    if (cy == 0) continue;
    for (std::uint64_t k = 0; k < nz; ++k) {
      const double z = zr.lo + (static_cast<double>(k) + 0.5) * resolution;
      cz += conjunction({point_in_polygon({x, z}, profile_unit.ring),
                         classify_interval(z, plan_interval)}) == Classification::kInside;
    }
    inside += cy * cz;
  }
  return static_cast<double>(inside) * resolution * resolution * resolution;
}

}  // namespace rockmodel
