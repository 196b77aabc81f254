#include "rockmodel/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "rockmodel/errors.hpp"
#include "text_format.hpp"

namespace rockmodel {

WatertightReport check_watertight(const TriMesh& m) {
  WatertightReport report;
  // Undirected edge -> directed uses.
  std::map<std::pair<std::uint32_t, std::uint32_t>,
           std::vector<std::pair<std::uint32_t, std::uint32_t>>>
      edges;
  for (const Triangle& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = t[k], b = t[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back({a, b});
    }
  }
  for (const auto& [key, uses] : edges) {
    if (uses.size() == 1) {
      report.problems.push_back({EdgeProblem::Kind::kBoundary, key.first, key.second});
    } else if (uses.size() > 2) {
      report.problems.push_back({EdgeProblem::Kind::kNonManifold, key.first, key.second});
    } else if (uses[0].first == uses[1].first) {
      report.problems.push_back({EdgeProblem::Kind::kOrientation, key.first, key.second});
    }
  }
  report.watertight = !m.triangles.empty() && report.problems.empty();
  return report;
}

double mesh_volume(const TriMesh& m) {
  if (!is_watertight(m)) {
    throw Error(ErrorCode::kOpenMesh, "mesh_volume requires a watertight mesh");
  }
  // Tetrahedra are fanned from the first vertex rather than the frame origin
  // so that far-from-origin meshes do not lose digits to cancellation.
  const Point3 r = m.vertices.front();
  double sum = 0.0;
  for (const Triangle& t : m.triangles) {
    const Point3 a = m.vertices[t[0]] - r;
    const Point3 b = m.vertices[t[1]] - r;
    const Point3 c = m.vertices[t[2]] - r;
    sum += dot(a, cross(b, c));
  }
  return sum / 6.0;
}

double triangle_area(const TriMesh& m, const Triangle& t) {
  const Point3& a = m.vertices[t[0]];
  return 0.5 * norm(cross(m.vertices[t[1]] - a, m.vertices[t[2]] - a));
}

Bounds3 bounds(const TriMesh& m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Bounds3 b{{inf, inf, inf}, {-inf, -inf, -inf}};
  for (const Point3& p : m.vertices) {
    b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y), std::min(b.lo.z, p.z)};
    b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y), std::max(b.hi.z, p.z)};
  }
  return b;
}

double distance_to_triangle(const Point3& p, const Point3& a, const Point3& b,
                            const Point3& c) {
  // Closest point by Voronoi region of the triangle.
  const Point3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return norm(ap);
  const Point3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return norm(bp);
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return norm(p - (a + ab * v));
  }
  const Point3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return norm(cp);
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return norm(p - (a + ac * w));
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return norm(p - (b + (c - b) * w));
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return norm(p - (a + ab * v + ac * w));
}

double distance_to_mesh(const TriMesh& m, const Point3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Triangle& t : m.triangles) {
    best = std::min(best, distance_to_triangle(p, m.vertices[t[0]], m.vertices[t[1]],
                                               m.vertices[t[2]]));
  }
  return best;
}

Classification point_in_mesh(const TriMesh& m, const Point3& p, std::uint64_t seed) {
  if (!is_watertight(m)) {
    throw Error(ErrorCode::kOpenMesh, "point_in_mesh requires a watertight mesh");
  }
  const Bounds3 b = bounds(m);
  if (p.x < b.lo.x - kEpsGeom || p.y < b.lo.y - kEpsGeom || p.z < b.lo.z - kEpsGeom ||
      p.x > b.hi.x + kEpsGeom || p.y > b.hi.y + kEpsGeom || p.z > b.hi.z + kEpsGeom) {
    return Classification::kOutside;
  }
  if (distance_to_mesh(m, p) <= kEpsGeom) return Classification::kOnBoundary;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  constexpr double kBaryTol = 1e-9;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Point3 dir{gauss(rng), gauss(rng), gauss(rng)};
    const double len = norm(dir);
    if (len < 1e-6) continue;
    dir = dir * (1.0 / len);

    int crossings = 0;
    bool degenerate = false;
    for (const Triangle& t : m.triangles) {
      const Point3& v0 = m.vertices[t[0]];
      const Point3 e1 = m.vertices[t[1]] - v0;
      const Point3 e2 = m.vertices[t[2]] - v0;
      const Point3 h = cross(dir, e2);
      const double det = dot(e1, h);
      const double scale = norm(e1) * norm(e2);
      if (std::abs(det) <= 1e-12 * scale) continue;  // ray parallel to the face
      const double inv = 1.0 / det;
      const Point3 s = p - v0;
      const double u = dot(s, h) * inv;
      if (u < -kBaryTol || u > 1.0 + kBaryTol) continue;
      const Point3 q = cross(s, e1);
      const double v = dot(dir, q) * inv;
      if (v < -kBaryTol || u + v > 1.0 + kBaryTol) continue;
      const double dist = dot(e2, q) * inv;
      if (dist <= 0.0) continue;
      if (u < kBaryTol || v < kBaryTol || u + v > 1.0 - kBaryTol) {
        degenerate = true;
        break;
      }
      ++crossings;
    }
    if (!degenerate) {
      return crossings % 2 == 1 ? Classification::kInside : Classification::kOutside;
    }
  }
  throw Error(ErrorCode::kOpenMesh, "point_in_mesh: every ray direction was degenerate");
}

void flip_winding(TriMesh& m) {
  for (Triangle& t : m.triangles) std::swap(t[1], t[2]);
}

std::string object_name(const TriMesh& m, std::size_t index) {
  if (m.tag) {
    return "mass" + std::to_string(m.tag->mass_id) + "_layer" +
           std::to_string(m.tag->layer_id);
  }
  return "mesh" + std::to_string(index);
}

std::string export_obj(std::span<const TriMesh> meshes) {
  std::string out = "# rockmodel OBJ export\n";
  std::size_t base = 1;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const TriMesh& m = meshes[i];
    out += "o " + object_name(m, i) + "\n";
    for (const Point3& p : m.vertices) {
      out += "v " + detail::shortest(p.x) + " " + detail::shortest(p.y) + " " +
             detail::shortest(p.z) + "\n";
    }
    for (const Triangle& t : m.triangles) {
      out += "f " + std::to_string(base + t[0]) + " " + std::to_string(base + t[1]) +
             " " + std::to_string(base + t[2]) + "\n";
    }
    base += m.vertices.size();
  }
  return out;
}

}  // namespace rockmodel

namespace rockmodel {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

using EdgeKey = std::pair<std::uint32_t, std::uint32_t>;

EdgeKey undirected(std::uint32_t a, std::uint32_t b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

std::size_t split_pinched_vertices(TriMesh& m) {
  const std::size_t nt = m.triangles.size();
  std::map<EdgeKey, std::vector<std::size_t>> uses;
  for (std::size_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      uses[undirected(m.triangles[t][k], m.triangles[t][(k + 1) % 3])].push_back(t);
    }
  }

  // Radial pairing on over-used edges: a face running b->a is glued to the
  // next face counterclockwise about a->b, which bounds the same solid wedge.
  std::map<std::pair<EdgeKey, std::size_t>, std::size_t> partner;
  for (const auto& [key, faces] : uses) {
    if (faces.size() <= 2) continue;
    const Point3 a = m.vertices[key.first];
    const Point3 d0 = m.vertices[key.second] - a;
    const Point3 d = d0 * (1.0 / norm(d0));
    const Point3 seed = std::abs(d.x) < 0.9 ? Point3{1, 0, 0} : Point3{0, 1, 0};
    Point3 e1 = seed - d * dot(seed, d);
    e1 = e1 * (1.0 / norm(e1));
    const Point3 e2 = cross(d, e1);
    struct Wing {
      double angle;
      std::size_t face;
      bool forward;  // face traverses key.first -> key.second
    };
    std::vector<Wing> wings;
    for (std::size_t t : faces) {
      const Triangle& tri = m.triangles[t];
      std::uint32_t c = 0;
      bool forward = false;
      for (int k = 0; k < 3; ++k) {
        if (tri[k] != key.first && tri[k] != key.second) c = tri[k];
        if (tri[k] == key.first && tri[(k + 1) % 3] == key.second) forward = true;
      }
      const Point3 w = m.vertices[c] - a;
      wings.push_back({std::atan2(dot(w, e2), dot(w, e1)), t, forward});
    }
    std::sort(wings.begin(), wings.end(),
              [](const Wing& l, const Wing& r) { return l.angle < r.angle; });
    for (std::size_t i = 0; i < wings.size(); ++i) {
      const Wing& w = wings[i];
      const Wing& next = wings[(i + 1) % wings.size()];
      if (!w.forward && next.forward) {
        partner[{key, w.face}] = next.face;
        partner[{key, next.face}] = w.face;
      }
    }
  }

  // Incident faces per vertex.
  std::vector<std::vector<std::size_t>> incident(m.vertices.size());
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::uint32_t v : m.triangles[t]) incident[v].push_back(t);
  }

  struct Rename {
    std::size_t face;
    std::uint32_t from;
    std::uint32_t to;
  };
  std::vector<Rename> renames;
  std::size_t added = 0;
  const std::size_t nv = m.vertices.size();
  for (std::uint32_t v = 0; v < nv; ++v) {
    const auto& fan = incident[v];
    if (fan.size() < 2) continue;
    DisjointSets sets(fan.size());
    auto local = [&](std::size_t t) {
      return static_cast<std::size_t>(std::find(fan.begin(), fan.end(), t) - fan.begin());
    };
    for (std::size_t i = 0; i < fan.size(); ++i) {
      const Triangle& tri = m.triangles[fan[i]];
      for (int k = 0; k < 3; ++k) {
        const std::uint32_t a = tri[k], b = tri[(k + 1) % 3];
        if (a != v && b != v) continue;
        const EdgeKey key = undirected(a, b);
        const auto& faces = uses.at(key);
        if (faces.size() == 2) {
          sets.unite(i, local(faces[0] == fan[i] ? faces[1] : faces[0]));
        } else if (auto it = partner.find({key, fan[i]}); it != partner.end()) {
          sets.unite(i, local(it->second));
        }
      }
    }
    std::map<std::size_t, std::uint32_t> index_of_root;
    for (std::size_t i = 0; i < fan.size(); ++i) {
      const std::size_t root = sets.find(i);
      auto [it, fresh] = index_of_root.try_emplace(root, v);
      if (fresh && root != sets.find(0)) {
        it->second = static_cast<std::uint32_t>(m.vertices.size());
        m.vertices.push_back(m.vertices[v]);
        ++added;
      }
      if (it->second != v) renames.push_back({fan[i], v, it->second});
    }
  }
  for (const auto& r : renames) {
    for (std::uint32_t& ref : m.triangles[r.face]) {
      if (ref == r.from) ref = r.to;
    }
  }
  return added;
}

}  // namespace rockmodel
