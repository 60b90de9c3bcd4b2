#ifndef MFRA_UNITCELL_HPP
#define MFRA_UNITCELL_HPP

#include "mfra/emcore.hpp"

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfra {

// The five sweepable dimensions of the cross-shaped dielectric element plus
// the lattice constants it sits on. All lengths in mm. The two arms lie
// along the 45-degree eigen axes of the cell: lx controls the u-axis
// response, ly the v-axis response (adopted convention, documented in the
// README).
struct CellGeometry {
  double lx = 0.0;
  double ly = 0.0;
  double hu = 0.2;
  double w1 = 6.0;
  double w2 = 6.0;
  double period = 6.0;
  double substrate_h = 0.4;

  // Throws std::invalid_argument when arm lengths are non-positive or exceed
  // the period, or when heights/thicknesses are non-positive.
  void validate() const;
};

// Complex reflection coefficients along the cell's two eigen axes.
struct EigenReflection {
  Complex r_u;
  Complex r_v;
  Frequency freq;
};

// Jones operator of the anisotropic cell in the global xy basis:
// rotate_basis(diag(r_u, r_v), 45 deg). Off-diagonal entries are
// (r_u - r_v)/2, diagonal entries (r_u + r_v)/2.
JonesMatrix rms_jones(const EigenReflection& eig);

struct ConversionRatio {
  double cross_mag;        // |r_u - r_v| / 2, the y->x conversion magnitude
  double co_mag;           // |r_u + r_v| / 2, residual co-polar reflection
  double cross_phase_deg;  // arg((r_u - r_v)/2) in [0, 360)
};

// Derived from the rms_jones operator entries (matrix route); tests check it
// against direct complex arithmetic.
ConversionRatio conversion_ratio(const EigenReflection& eig);

// Closed-form stand-in for a full-wave parametric sweep of the cell. Each
// eigen axis reflects with phase given by two cascaded arctangent S-curves
// (two resonances vs. arm length); the element height shifts the second
// resonance and the arm width pulls both centers. Magnitude is flat at
// 1 - loss_floor. Phase decreases monotonically with arm length and spans
// more than 400 degrees over the sweep range at the reference frequency.
struct SurrogateParams {
  double resonance_l1_mm = 1.6;
  double resonance_l2_mm = 3.6;
  double slope1_deg_per_mm = 330.0;
  double slope2_deg_per_mm = 330.0;
  double height_shift_deg_per_mm = -240.0;
  double width_pull_mm_per_mm = 0.02;
  double loss_floor = 0.02;
  // Electrical-length dispersion: l_eff = l * (1 + df*(f/f0 - 1)). The
  // stacked-resonance cells hold their phase flatter over frequency than a
  // single resonator would; 1.0 means full wavelength scaling.
  double dispersion_factor = 0.35;
  double reference_height_mm = 0.2;
  double reference_width_mm = 6.0;
  double reference_freq_ghz = 28.0;
  double l_min_mm = 0.1;
  double l_max_mm = 5.2;
};

// Unwrapped reflection phase of one eigen axis in degrees. Exposed for
// direct calibration checks; surrogate_eigen wraps this into a coefficient.
double surrogate_axis_phase_deg(double arm_mm, double height_mm,
                                double width_mm, Frequency f,
                                const SurrogateParams& p);

// Throws std::out_of_range when an arm length is outside [l_min, l_max].
EigenReflection surrogate_eigen(const CellGeometry& g, Frequency f,
                                const SurrogateParams& p);

struct PhaseTableEntry {
  CellGeometry geometry;
  double freq_ghz;
  Complex r_xy;  // y->x cross reflection
  Complex r_yy;  // residual co reflection
};

// Ingestion failure with the offending 1-based line numbers.
class TableIngestError : public std::runtime_error {
 public:
  TableIngestError(const std::string& msg, std::vector<std::size_t> lines);
  const std::vector<std::size_t>& lines() const { return lines_; }

 private:
  std::vector<std::size_t> lines_;
};

// No geometry satisfies a magnitude/phase constraint; carries the achievable
// unwrapped span for diagnostics.
class CoverageError : public std::runtime_error {
 public:
  CoverageError(const std::string& msg, double achievable_span_deg);
  double achievable_span_deg() const { return span_; }

 private:
  double span_;
};

// Frequency-indexed collection of sweep samples. Immutable after ingestion;
// entries keep their source order (the unwrapping order for coverage).
class PhaseTable {
 public:
  PhaseTable() = default;
  explicit PhaseTable(std::vector<PhaseTableEntry> entries);

  const std::vector<PhaseTableEntry>& entries() const { return entries_; }
  std::vector<double> frequencies_ghz() const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Entries interpolated to f: linear on unwrapped phase and on magnitude
  // between the two bracketing tabulated frequencies, nearest neighbour in
  // geometry (no geometric interpolation; fabricated cells are discrete).
  // Throws std::out_of_range when f lies outside the tabulated band.
  std::vector<PhaseTableEntry> at(Frequency f) const;

 private:
  std::vector<PhaseTableEntry> entries_;
};

// CSV schema (header mandatory, comma separated, dot decimal):
// freq_ghz,lx_mm,ly_mm,hu_mm,w1_mm,w2_mm,re_rxy,im_rxy,re_ryy,im_ryy
PhaseTable ingest_phase_table(std::istream& in);
void export_phase_table(const PhaseTable& table, std::ostream& out);

// One candidate the synthesis can pick: a geometry with its cross/co
// response at the query frequency. cross_phase_unwrapped_deg is populated
// by analytic sources whose phase is known without modular ambiguity.
struct SourceSample {
  CellGeometry geometry;
  Complex r_xy;
  Complex r_yy;
  double cross_phase_unwrapped_deg = 0.0;
  bool has_unwrapped = false;
};

struct CoverageInterval {
  double lo_deg;
  double hi_deg;
  double span() const { return hi_deg - lo_deg; }
};

// Common interface over a tabulated sweep and the analytic surrogate.
class PhaseSource {
 public:
  virtual ~PhaseSource() = default;

  // All candidates at f, in a deterministic parameter order.
  virtual std::vector<SourceSample> samples(Frequency f) const = 0;

  // Jones operator of a given geometry at f (used when evaluating a design
  // away from its synthesis frequency).
  virtual JonesMatrix jones(const CellGeometry& g, Frequency f) const = 0;

  // Jones operator of a designed element. Default re-evaluates the assigned
  // geometry at f; sources without a geometry model (IdealSource) build it
  // from the recorded response instead.
  virtual JonesMatrix element_jones(const CellGeometry& g,
                                    const Complex& achieved_rxy,
                                    Frequency f) const;

  // Best candidate for a target cross phase among samples with
  // |r_xy| >= min_cross_mag: minimal wrapped phase distance, ties broken by
  // larger |r_xy| then smaller lx + ly. Throws CoverageError when nothing
  // qualifies.
  virtual SourceSample lookup(double target_phase_deg, Frequency f,
                              double min_cross_mag) const;

  // Unwrapped achievable cross-phase interval among qualifying samples.
  // Throws CoverageError with fewer than two qualifying samples.
  virtual CoverageInterval coverage_interval(Frequency f,
                                             double min_cross_mag) const;
};

CellGeometry lookup_geometry(double target_phase_deg, Frequency f,
                             const PhaseSource& source, double min_cross_mag);

double phase_coverage(const PhaseSource& source, Frequency f,
                      double min_cross_mag);

// Analytic source: tabulates the surrogate on a (lx, ly, hu) grid per
// frequency and caches the scan. Samples carry analytically unwrapped
// cross phases, so coverage can exceed 360 degrees without guesswork.
class SurrogateSource : public PhaseSource {
 public:
  explicit SurrogateSource(SurrogateParams params = {},
                           double grid_step_mm = 0.05,
                           std::vector<double> heights_mm = {0.2, 0.4});

  const SurrogateParams& params() const { return params_; }
  std::vector<SourceSample> samples(Frequency f) const override;
  JonesMatrix jones(const CellGeometry& g, Frequency f) const override;

 private:
  SurrogateParams params_;
  double grid_step_;
  std::vector<double> heights_;
  mutable std::vector<std::pair<double, std::vector<SourceSample>>> cache_;
};

// Sweep-table source. Sample order = table order; coverage unwraps along it
// (a listing whose phases are already monotone is taken at face value,
// otherwise standard minimal-jump unwrapping is applied).
class TableSource : public PhaseSource {
 public:
  explicit TableSource(PhaseTable table);

  const PhaseTable& table() const { return table_; }
  std::vector<SourceSample> samples(Frequency f) const override;
  JonesMatrix jones(const CellGeometry& g, Frequency f) const override;

 private:
  PhaseTable table_;
};

// Lossless element achieving any cross phase exactly; the frequency response
// is flat. Used for pipeline-identity checks and as the "ideal" CLI source.
class IdealSource : public PhaseSource {
 public:
  std::vector<SourceSample> samples(Frequency f) const override;
  JonesMatrix jones(const CellGeometry& g, Frequency f) const override;
  JonesMatrix element_jones(const CellGeometry& g, const Complex& achieved_rxy,
                            Frequency f) const override;
  SourceSample lookup(double target_phase_deg, Frequency f,
                      double min_cross_mag) const override;
  CoverageInterval coverage_interval(Frequency f,
                                     double min_cross_mag) const override;
};

}  // namespace mfra

#endif
