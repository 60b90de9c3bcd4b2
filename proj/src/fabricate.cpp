#include "mfra/fabricate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <ostream>

namespace mfra {

namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;

double signed_area(const std::vector<Vector2d>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vector2d& p = poly[i];
    const Vector2d& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return a / 2.0;
}

double cross2(const Vector2d& a, const Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

bool point_in_triangle(const Vector2d& p, const Vector2d& a, const Vector2d& b,
                       const Vector2d& c) {
  const double d1 = cross2(b - a, p - a);
  const double d2 = cross2(c - b, p - b);
  const double d3 = cross2(a - c, p - c);
  return d1 > 0.0 && d2 > 0.0 && d3 > 0.0;
}

// Ear clipping for simple polygons (input may wind either way).
std::vector<std::array<int, 3>> triangulate(const std::vector<Vector2d>& poly) {
  std::vector<int> idx(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) idx[i] = static_cast<int>(i);
  if (signed_area(poly) < 0.0) std::reverse(idx.begin(), idx.end());

  std::vector<std::array<int, 3>> tris;
  while (idx.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const int ia = idx[(i + idx.size() - 1) % idx.size()];
      const int ib = idx[i];
      const int ic = idx[(i + 1) % idx.size()];
      const Vector2d& a = poly[ia];
      const Vector2d& b = poly[ib];
      const Vector2d& c = poly[ic];
      if (cross2(b - a, c - b) <= 0.0) continue;  // reflex or collinear
      bool blocked = false;
      for (int other : idx) {
        if (other == ia || other == ib || other == ic) continue;
        if (point_in_triangle(poly[other], a, b, c)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped) {
      throw std::invalid_argument("polygon cannot be triangulated");
    }
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

// Triangulates the ring between two convex loops star-shaped about the
// origin (both CCW) by merging their vertices in angular order. Returned
// indices address the outer loop first, then the inner loop.
std::vector<std::array<int, 3>> ring_fill(const std::vector<Vector2d>& outer,
                                          const std::vector<Vector2d>& inner) {
  auto ang = [](const Vector2d& p) { return std::atan2(p.y(), p.x()); };
  const std::size_t no = outer.size();
  const std::size_t ni = inner.size();

  std::vector<double> ao(no + 1);
  for (std::size_t i = 0; i < no; ++i) ao[i] = ang(outer[i]);
  for (std::size_t i = 1; i < no; ++i) {
    while (ao[i] < ao[i - 1]) ao[i] += 2.0 * kPi;
  }
  ao[no] = ao[0] + 2.0 * kPi;

  std::size_t j0 = 0;
  double best = 1e9;
  for (std::size_t j = 0; j < ni; ++j) {
    double d = ang(inner[j]) - ao[0];
    while (d < 0.0) d += 2.0 * kPi;
    if (d < best) {
      best = d;
      j0 = j;
    }
  }
  std::vector<double> bi(ni + 1);
  bi[0] = ao[0] + best;
  for (std::size_t j = 1; j < ni; ++j) {
    bi[j] = ang(inner[(j0 + j) % ni]);
    while (bi[j] < bi[j - 1]) bi[j] += 2.0 * kPi;
  }
  bi[ni] = bi[0] + 2.0 * kPi;

  auto oidx = [&](std::size_t i) { return static_cast<int>(i % no); };
  auto iidx = [&](std::size_t j) {
    return static_cast<int>(no + (j0 + j) % ni);
  };
  auto at = [&](int v) {
    return v < static_cast<int>(no) ? outer[v] : inner[v - no];
  };

  std::vector<std::array<int, 3>> tris;
  std::size_t i = 0, j = 0;
  while (i < no || j < ni) {
    const bool advance_outer = j >= ni || (i < no && ao[i + 1] <= bi[j + 1]);
    std::array<int, 3> t;
    if (advance_outer) {
      t = {oidx(i), oidx(i + 1), iidx(j)};
      ++i;
    } else {
      t = {iidx(j + 1), iidx(j), oidx(i)};
      ++j;
    }
    if (cross2(at(t[1]) - at(t[0]), at(t[2]) - at(t[0])) < 0.0) {
      std::swap(t[1], t[2]);
    }
    tris.push_back(t);
  }
  return tris;
}

// Closed prism over a ring: outer boundary minus an inner hole.
Mesh extrude_ring(const std::vector<Vector2d>& outer,
                  const std::vector<Vector2d>& hole, double z0, double z1) {
  const int no = static_cast<int>(outer.size());
  const int ni = static_cast<int>(hole.size());
  const int N = no + ni;
  Mesh m;
  for (const auto& p : outer) m.vertices.emplace_back(p.x(), p.y(), z0);
  for (const auto& p : hole) m.vertices.emplace_back(p.x(), p.y(), z0);
  for (const auto& p : outer) m.vertices.emplace_back(p.x(), p.y(), z1);
  for (const auto& p : hole) m.vertices.emplace_back(p.x(), p.y(), z1);

  for (const auto& t : ring_fill(outer, hole)) {
    m.triangles.push_back({t[0] + N, t[1] + N, t[2] + N});  // top, +z
    m.triangles.push_back({t[0], t[2], t[1]});              // bottom, -z
  }
  for (int i = 0; i < no; ++i) {
    const int j = (i + 1) % no;
    m.triangles.push_back({i, j, j + N});
    m.triangles.push_back({i, j + N, i + N});
  }
  for (int i = 0; i < ni; ++i) {
    // Hole walls run against the loop so they face the opening.
    const int a = no + (i + 1) % ni;
    const int b = no + i;
    m.triangles.push_back({a, b, b + N});
    m.triangles.push_back({a, b + N, a + N});
  }
  return m;
}

std::vector<Vector2d> rect_ccw(double half_u, double half_v) {
  return {{half_u, -half_v},
          {half_u, half_v},
          {-half_u, half_v},
          {-half_u, -half_v}};
}

std::vector<Vector2d> transform(const std::vector<Vector2d>& poly,
                                double rotation_deg, const Vector2d& shift) {
  const double a = deg2rad(rotation_deg);
  const double c = std::cos(a);
  const double s = std::sin(a);
  std::vector<Vector2d> out;
  out.reserve(poly.size());
  for (const auto& p : poly) {
    out.emplace_back(c * p.x() - s * p.y() + shift.x(),
                     s * p.x() + c * p.y() + shift.y());
  }
  return out;
}

// Convex polygon overlap via the separating-axis test; touching counts.
bool convex_overlap(const std::vector<Vector2d>& a,
                    const std::vector<Vector2d>& b) {
  auto separated = [](const std::vector<Vector2d>& edges_of,
                      const std::vector<Vector2d>& other) {
    for (std::size_t i = 0; i < edges_of.size(); ++i) {
      const Vector2d e = edges_of[(i + 1) % edges_of.size()] - edges_of[i];
      const Vector2d n(-e.y(), e.x());
      double min_a = 1e300, max_a = -1e300, min_b = 1e300, max_b = -1e300;
      for (const auto& p : edges_of) {
        const double d = n.dot(p);
        min_a = std::min(min_a, d);
        max_a = std::max(max_a, d);
      }
      for (const auto& p : other) {
        const double d = n.dot(p);
        min_b = std::min(min_b, d);
        max_b = std::max(max_b, d);
      }
      if (max_a < min_b || max_b < min_a) return true;
    }
    return false;
  };
  return !separated(a, b) && !separated(b, a);
}

// Union footprint of the two centred arms: either one rectangle contains
// the other or they form a proper 12-vertex cross.
std::vector<Vector2d> cross_footprint(const CellGeometry& g) {
  const double a = g.lx / 2.0, b = g.w1 / 2.0;  // arm along u
  const double c = g.w2 / 2.0, d = g.ly / 2.0;  // arm along v
  if (g.lx <= g.w2 && g.w1 <= g.ly) return rect_ccw(c, d);
  if (g.w2 <= g.lx && g.ly <= g.w1) return rect_ccw(a, b);
  return {{a, -b}, {a, b},   {c, b},   {c, d},  {-c, d}, {-c, b},
          {-a, b}, {-a, -b}, {-c, -b}, {-c, -d}, {c, -d}, {c, -b}};
}

}  // namespace

void Mesh::append(const Mesh& other) {
  const int offset = static_cast<int>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(),
                  other.vertices.end());
  for (const auto& t : other.triangles) {
    triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
  }
}

Mesh extrude_polygon(const std::vector<Vector2d>& polygon, double z0,
                     double z1) {
  if (polygon.size() < 3) {
    throw std::invalid_argument("polygon needs at least 3 vertices");
  }
  if (!(z1 > z0)) {
    throw std::invalid_argument("extrusion needs z1 > z0");
  }
  std::vector<Vector2d> poly = polygon;
  if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());

  const auto tris = triangulate(poly);
  Mesh m;
  const int n = static_cast<int>(poly.size());
  for (const auto& p : poly) m.vertices.emplace_back(p.x(), p.y(), z0);
  for (const auto& p : poly) m.vertices.emplace_back(p.x(), p.y(), z1);
  for (const auto& t : tris) {
    m.triangles.push_back({t[0], t[2], t[1]});              // bottom, -z
    m.triangles.push_back({t[0] + n, t[1] + n, t[2] + n});  // top, +z
  }
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    m.triangles.push_back({i, j, j + n});
    m.triangles.push_back({i, j + n, i + n});
  }
  return m;
}

Mesh make_box(double size_x, double size_y, double z0, double z1,
              double center_x, double center_y) {
  auto poly = rect_ccw(size_x / 2.0, size_y / 2.0);
  for (auto& p : poly) p += Vector2d(center_x, center_y);
  return extrude_polygon(poly, z0, z1);
}

Mesh cross_solid(const CellGeometry& g, const Vector3d& center,
                 double rotation_deg) {
  if (!(g.lx > 0.0) || !(g.ly > 0.0) || !(g.w1 > 0.0) || !(g.w2 > 0.0) ||
      !(g.hu > 0.0)) {
    throw std::invalid_argument("cross solid requires positive arm dimensions");
  }
  const auto footprint =
      transform(cross_footprint(g), rotation_deg, {center.x(), center.y()});
  return extrude_polygon(footprint, center.z(), center.z() + g.hu);
}

Mesh assemble_rms_mesh(const DesignedAperture& design, double substrate_h_mm,
                       double aperture_d_mm, CutoutOverlapPolicy policy,
                       AssemblyReport* report) {
  if (!(substrate_h_mm > 0.0) || !(aperture_d_mm > 0.0)) {
    throw std::invalid_argument(
        "substrate and aperture sizes must be positive");
  }
  const FeedCutout& cut = design.geometry.feed_cutout;
  const bool has_hole = cut.width_mm > 0.0 && cut.length_mm > 0.0;

  const auto outer = rect_ccw(aperture_d_mm / 2.0, aperture_d_mm / 2.0);
  std::vector<Vector2d> hole;
  Mesh m;
  if (has_hole) {
    hole = transform(rect_ccw(cut.width_mm / 2.0, cut.length_mm / 2.0),
                     cut.rotation_deg, {0.0, 0.0});
    m = extrude_ring(outer, hole, 0.0, substrate_h_mm);
  } else {
    m = extrude_polygon(outer, 0.0, substrate_h_mm);
  }

  AssemblyReport rep;
  for (const auto& e : design.elements) {
    if (e.omitted) continue;
    if (has_hole) {
      const Vector2d at(e.at.x_mm, e.at.y_mm);
      const auto arm_u =
          transform(rect_ccw(e.geometry.lx / 2.0, e.geometry.w1 / 2.0), 45.0,
                    at);
      const auto arm_v =
          transform(rect_ccw(e.geometry.w2 / 2.0, e.geometry.ly / 2.0), 45.0,
                    at);
      if (convex_overlap(arm_u, hole) || convex_overlap(arm_v, hole)) {
        if (policy == CutoutOverlapPolicy::raise) {
          throw AssemblyError(
              "element at (" + std::to_string(e.at.x_mm) + ", " +
              std::to_string(e.at.y_mm) +
              ") overlaps the feed opening; regenerate the layout with "
              "cutout clearance or assemble with the omit policy");
        }
        ++rep.elements_omitted_for_cutout;
        continue;
      }
    }
    m.append(
        cross_solid(e.geometry, {e.at.x_mm, e.at.y_mm, substrate_h_mm}, 45.0));
    ++rep.elements_meshed;
  }
  if (report != nullptr) *report = rep;
  return m;
}

Mesh mpg_grid_mesh(const MpgModel& mpg, double panel_width_mm,
                   double panel_length_mm, double substrate_h_mm,
                   double strip_h_mm) {
  if (!(panel_width_mm > 0.0) || !(panel_length_mm > 0.0) ||
      !(substrate_h_mm > 0.0) || !(strip_h_mm > 0.0)) {
    throw std::invalid_argument("panel dimensions must be positive");
  }
  Mesh m = make_box(panel_width_mm, panel_length_mm, 0.0, substrate_h_mm);
  const int count =
      static_cast<int>(std::floor(panel_width_mm / mpg.pitch_mm())) + 1;
  const double x_start = -panel_width_mm / 2.0;
  for (int k = 0; k < count; ++k) {
    m.append(make_box(mpg.strip_width_mm(), panel_length_mm, substrate_h_mm,
                      substrate_h_mm + strip_h_mm,
                      x_start + k * mpg.pitch_mm(), 0.0));
  }
  return m;
}

double mesh_volume(const Mesh& mesh) {
  double v6 = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vector3d& a = mesh.vertices[t[0]];
    const Vector3d& b = mesh.vertices[t[1]];
    const Vector3d& c = mesh.vertices[t[2]];
    v6 += a.dot(b.cross(c));
  }
  return v6 / 6.0;
}

WatertightReport watertight_check(const Mesh& mesh) {
  WatertightReport rep;
  std::map<std::pair<int, int>, std::pair<int, int>> edges;  // fwd, rev
  for (const auto& t : mesh.triangles) {
    const Vector3d& a = mesh.vertices[t[0]];
    const Vector3d& b = mesh.vertices[t[1]];
    const Vector3d& c = mesh.vertices[t[2]];
    if (0.5 * ((b - a).cross(c - a)).norm() <= 1e-9) {
      ++rep.degenerate_triangles;
    }
    for (int k = 0; k < 3; ++k) {
      const int i = t[k];
      const int j = t[(k + 1) % 3];
      auto& slot = edges[{std::min(i, j), std::max(i, j)}];
      if (i < j) {
        ++slot.first;
      } else {
        ++slot.second;
      }
    }
  }
  for (const auto& [key, counts] : edges) {
    const int total = counts.first + counts.second;
    if (total == 1) {
      ++rep.boundary_edges;
    } else if (total > 2) {
      ++rep.nonmanifold_edges;
    } else if (counts.first != 1 || counts.second != 1) {
      ++rep.misoriented_edges;
    }
  }
  return rep;
}

void export_stl_binary(const Mesh& mesh, const std::string& path, bool force) {
  const auto rep = watertight_check(mesh);
  if (!rep.watertight() && !force) {
    throw std::runtime_error(
        "mesh is not watertight (" + std::to_string(rep.boundary_edges) +
        " boundary, " + std::to_string(rep.nonmanifold_edges) +
        " non-manifold edges); pass force to export anyway");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot open '" + path + "' for writing");
  }

  char header[80] = {};
  std::snprintf(header, sizeof(header), "mfra binary stl");
  out.write(header, sizeof(header));
  const auto count = static_cast<std::uint32_t>(mesh.triangles.size());
  out.write(reinterpret_cast<const char*>(&count), 4);

  for (const auto& t : mesh.triangles) {
    const Vector3d& a = mesh.vertices[t[0]];
    const Vector3d& b = mesh.vertices[t[1]];
    const Vector3d& c = mesh.vertices[t[2]];
    Vector3d n = (b - a).cross(c - a);
    const double len = n.norm();
    n = len > 0.0 ? Vector3d(n / len) : Vector3d::Zero();

    const float rec[12] = {
        static_cast<float>(n.x()), static_cast<float>(n.y()),
        static_cast<float>(n.z()), static_cast<float>(a.x()),
        static_cast<float>(a.y()), static_cast<float>(a.z()),
        static_cast<float>(b.x()), static_cast<float>(b.y()),
        static_cast<float>(b.z()), static_cast<float>(c.x()),
        static_cast<float>(c.y()), static_cast<float>(c.z())};
    out.write(reinterpret_cast<const char*>(rec), sizeof(rec));
    const std::uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
  if (!out) {
    throw std::ios_base::failure("failed writing STL to '" + path + "'");
  }
}

Mesh import_stl_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::ios_base::failure("cannot open STL file '" + path + "'");
  }
  char header[80];
  in.read(header, sizeof(header));
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 4);
  if (!in) {
    throw std::ios_base::failure("truncated STL header in '" + path + "'");
  }

  Mesh m;
  std::map<std::array<float, 3>, int> dedup;
  auto vertex_index = [&](const float* v) {
    const std::array<float, 3> key{v[0], v[1], v[2]};
    auto [it, inserted] =
        dedup.emplace(key, static_cast<int>(m.vertices.size()));
    if (inserted) {
      m.vertices.emplace_back(v[0], v[1], v[2]);
    }
    return it->second;
  };
  for (std::uint32_t i = 0; i < count; ++i) {
    float rec[12];
    std::uint16_t attr;
    in.read(reinterpret_cast<char*>(rec), sizeof(rec));
    in.read(reinterpret_cast<char*>(&attr), 2);
    if (!in) {
      throw std::ios_base::failure("truncated STL record in '" + path + "'");
    }
    m.triangles.push_back(
        {vertex_index(rec + 3), vertex_index(rec + 6), vertex_index(rec + 9)});
  }
  return m;
}

Mesh translated(const Mesh& mesh, const Vector3d& delta) {
  Mesh out = mesh;
  for (auto& v : out.vertices) v += delta;
  return out;
}

void write_metallization_manifest(std::ostream& out,
                                  const std::vector<std::string>& face_groups) {
  for (const auto& g : face_groups) out << g << '\n';
}

}  // namespace mfra
