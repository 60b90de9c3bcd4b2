#ifndef MFRA_FABRICATE_HPP
#define MFRA_FABRICATE_HPP

#include "mfra/layout.hpp"
#include "mfra/polarizer.hpp"
#include "mfra/unitcell.hpp"

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mfra {

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Indexed triangle mesh. Triangles wind counter-clockwise seen from outside;
// generated solids are closed (possibly several closed shells in one mesh).
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;

  void append(const Mesh& other);
};

// Closed prism over a simple polygon (any winding), spanning [z0, z1].
Mesh extrude_polygon(const std::vector<Eigen::Vector2d>& polygon, double z0,
                     double z1);

Mesh make_box(double size_x, double size_y, double z0, double z1,
              double center_x = 0.0, double center_y = 0.0);

// Cross-shaped element: two orthogonal arms lx x w1 (along the first axis)
// and ly x w2, height hu, base at center.z, rotated by rotation_deg about
// the element centre. The overlap of the arms is meshed once (a single
// closed prism over the union footprint). Throws std::invalid_argument for
// zero-dimension arms.
Mesh cross_solid(const CellGeometry& g, const Eigen::Vector3d& center,
                 double rotation_deg);

enum class CutoutOverlapPolicy {
  raise,  // any element footprint touching the feed opening is an error
  omit,   // such elements are skipped and counted
};

struct AssemblyReport {
  int elements_meshed = 0;
  int elements_omitted_for_cutout = 0;
};

// Substrate slab with the rotated feed opening subtracted, plus one cross
// per non-omitted element sitting on the slab's top face. Each element is a
// closed shell of its own; the combined mesh has no boundary edges and its
// volume is the slab volume plus the sum of element volumes.
Mesh assemble_rms_mesh(const DesignedAperture& design, double substrate_h_mm,
                       double aperture_d_mm,
                       CutoutOverlapPolicy policy = CutoutOverlapPolicy::raise,
                       AssemblyReport* report = nullptr);

// Polarizer panel: substrate slab plus floor(panel_width/pitch)+1 strips of
// strip_width x panel_length x strip_h, running along y on the top face.
Mesh mpg_grid_mesh(const MpgModel& mpg, double panel_width_mm,
                   double panel_length_mm, double substrate_h_mm,
                   double strip_h_mm = 0.1);

// Signed tetrahedron sum; positive for outward-wound closed shells.
double mesh_volume(const Mesh& mesh);

struct WatertightReport {
  int boundary_edges = 0;     // edges with a single incident triangle
  int nonmanifold_edges = 0;  // edges with more than two incident triangles
  int misoriented_edges = 0;  // shared edges traversed twice the same way
  int degenerate_triangles = 0;  // area below 1e-9 mm^2
  bool watertight() const {
    return boundary_edges == 0 && nonmanifold_edges == 0 &&
           misoriented_edges == 0 && degenerate_triangles == 0;
  }
};

WatertightReport watertight_check(const Mesh& mesh);

// Binary STL: 80-byte header, little-endian uint32 triangle count, then 50
// bytes per triangle (float32 normal, three float32 vertices, uint16
// attribute = 0). Refuses non-watertight meshes unless force is set.
void export_stl_binary(const Mesh& mesh, const std::string& path,
                       bool force = false);
Mesh import_stl_binary(const std::string& path);

Mesh translated(const Mesh& mesh, const Eigen::Vector3d& delta);

// Plain-text sidecar naming the face groups to metallize, one per line.
void write_metallization_manifest(std::ostream& out,
                                  const std::vector<std::string>& face_groups);

}  // namespace mfra

#endif
