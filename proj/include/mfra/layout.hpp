#ifndef MFRA_LAYOUT_HPP
#define MFRA_LAYOUT_HPP

#include "mfra/emcore.hpp"
#include "mfra/unitcell.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mfra {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SynthesisError : public std::runtime_error {
 public:
  SynthesisError(const std::string& msg, double achievable_span_deg)
      : std::runtime_error(msg), span_(achievable_span_deg) {}
  double achievable_span_deg() const { return span_; }

 private:
  double span_;
};

// Central rectangular opening through which the feed fires, rotated about
// the aperture centre. The rotation matches the eigen-axis orientation of
// the cells so the feed excites both eigen modes equally.
struct FeedCutout {
  double width_mm = 18.5;
  double length_mm = 14.9;
  double rotation_deg = 45.0;

  bool contains(double x_mm, double y_mm) const;
};

struct LatticeSpec {
  double period_mm = 6.0;            // column pitch within a row
  double neighbor_spacing_mm = 3.0;  // row pitch; also the stagger of odd rows
  int tile_cols = 16;
  int tile_rows = 31;
};

// Folded-path geometry: the polarization grid sits fold_height_h above the
// reflective surface, so the mirror image of the feed acts as an equivalent
// feed at F = 2H behind the grid.
struct FoldedGeometry {
  double fold_height_h_mm = 40.0;
  double aperture_d_mm = 192.0;
  FeedCutout feed_cutout;
  LatticeSpec lattice;
  // When true, lattice sites whose centre falls inside the feed cutout are
  // dropped at generation time. The bundled default keeps all sites: the
  // prototype's quadrant tiling counts the full 4 x (cols x rows) grid and
  // treats the cutout as a substrate aperture (see README).
  bool remove_elements_in_cutout = false;

  double virtual_focal_f_mm() const;
};

// Mirror image of the feed in the grid plane: F = 2H. Throws
// std::domain_error for non-positive heights.
double virtual_focus(double fold_height_h_mm);

struct LatticeElement {
  double x_mm;
  double y_mm;
  int quadrant;  // 1:(+,+) 2:(-,+) 3:(-,-) 4:(+,-)
};

struct ApertureLayout {
  FoldedGeometry geometry;
  std::vector<LatticeElement> elements;
  int removed_by_cutout = 0;
};

// Four mirrored quadrant tiles of tile_cols x tile_rows sites on the
// staggered (triangular) lattice, centred per quadrant. Throws ConfigError
// when a tile does not fit its quadrant or the cutout swallows a whole tile.
ApertureLayout generate_lattice(const FoldedGeometry& geom);

// Collimation phase for an element at (x, y):
// wrap_deg((360/lambda) * (sqrt(x^2 + y^2 + F^2) - F) + phase_offset).
double required_phase(double x_mm, double y_mm, Frequency f,
                      const FoldedGeometry& geom, double phase_offset_deg);

struct DesignedElement {
  LatticeElement at;
  double required_phase_deg = 0.0;
  CellGeometry geometry;
  Complex achieved_rxy;
  double phase_error_deg = 0.0;
  bool omitted = false;
};

struct SynthesisStats {
  double rms_phase_error_deg = 0.0;
  double max_abs_phase_error_deg = 0.0;
  double min_cross_mag_achieved = 0.0;
  double mean_cross_mag_achieved = 0.0;
  double coverage_span_deg = 0.0;
  // Usage count per assigned geometry, keyed "lx/ly/hu" in mm.
  std::map<std::string, int> geometry_histogram;
};

struct DesignedAperture {
  FoldedGeometry geometry;
  double f0_ghz = 28.0;
  double min_cross_mag = 0.9;
  double phase_offset_deg = 0.0;
  std::vector<DesignedElement> elements;
  SynthesisStats stats;
};

// Assigns every lattice element the source geometry closest in wrapped
// phase to its required phase. Elements are processed and stored row-major
// (by y, then x) for deterministic output. phase_offset defaults to the
// midpoint of the source's covered span so the centre element lands mid
// range. Throws SynthesisError when coverage at f0 is below 360 degrees.
DesignedAperture synthesize(const ApertureLayout& layout,
                            const PhaseSource& source, Frequency f0,
                            double min_cross_mag,
                            std::optional<double> phase_offset_deg = {});

// Lossless JSON round-trip of the full design. schema_version is checked on
// import. config_hash/toolkit_version travel with the file when provided.
void export_design(const DesignedAperture& design, const std::string& path,
                   const std::string& config_hash = "");
std::string design_to_json(const DesignedAperture& design,
                           const std::string& config_hash = "");
DesignedAperture import_design(const std::string& path);
DesignedAperture design_from_json(const std::string& json_text);

}  // namespace mfra

#endif
