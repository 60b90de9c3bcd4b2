#ifndef MFRA_POFIELD_HPP
#define MFRA_POFIELD_HPP

#include "mfra/emcore.hpp"
#include "mfra/layout.hpp"
#include "mfra/polarizer.hpp"
#include "mfra/unitcell.hpp"

#include <iosfwd>
#include <vector>

namespace mfra {

// Axially symmetric cos^{2q}(theta) power pattern placed at the virtual
// focus on axis, radiating y polarization by default.
struct FeedModel {
  double q_exponent = 5.57;
  double peak_gain_dbi = 13.3;
  JonesVector polarization = (JonesVector() << 0.0, 1.0).finished();
};

// Exponent giving cos^{2q}(hpbw/2) = 0.5. Throws std::domain_error outside
// (0, 180).
double fit_cosq(double hpbw_deg);

// Directivity 2(2q+1) of the half-space cos^{2q} pattern, in dBi.
double cosq_directivity_dbi(double q);

// Fraction of the cos^{2q} feed power whose mirror-image ray lands inside
// the D x D aperture, by quadrature over the aperture plane.
double spillover_efficiency(const FeedModel& feed, const FoldedGeometry& geom);

// Closed-form spillover of a circular cone of half-angle theta0 (test
// bracket for the square aperture): 1 - cos^{2q+1}(theta0).
double spillover_cone(double q, double half_angle_deg);

// Per-element complex amplitudes after the folded chain. co rides the x
// polarization (the radiated beam), cx is the y leakage through the grid.
struct ApertureField {
  Eigen::ArrayXd x_mm;
  Eigen::ArrayXd y_mm;
  Eigen::ArrayXcd incident;
  Eigen::ArrayXcd co;
  Eigen::ArrayXcd cx;
  double cell_area_mm2 = 18.0;
  double freq_ghz = 28.0;
  double nominal_chain_power = 1.0;  // |r_parallel * t_perp|^2 at freq

  // Fraction of intercepted power that leaves the chain in either
  // polarization.
  double capture_efficiency() const;
};

// Feed taper cos^q(theta)*(F/r) with spherical phase -360 r/lambda, then the
// folded cascade with each element's Jones operator at f.
ApertureField illuminate(const DesignedAperture& design, const FeedModel& feed,
                         const MpgModel& mpg, const PhaseSource& source,
                         Frequency f);

struct FarFieldPattern {
  std::vector<double> theta_deg;
  std::vector<double> phi_deg;
  Eigen::MatrixXcd e_co;  // rows follow theta, columns follow phi
  Eigen::MatrixXcd e_cx;
  double freq_ghz = 0.0;
};

// Physical-optics sum E = (dA/lambda) cos(theta) sum_i a_i exp(jk r^.r_i),
// evaluated for co and cross amplitudes. Element terms are accumulated by
// pairwise summation so results are bit-identical for any thread count.
FarFieldPattern far_field(const ApertureField& ap,
                          const std::vector<double>& theta_deg,
                          const std::vector<double>& phi_deg,
                          int n_threads = 1);

// freq_ghz,phi_deg,theta_deg,co_db,cx_db normalized to the co-polar peak.
void write_pattern_csv(const FarFieldPattern& pattern, std::ostream& out);

struct MetricsOptions {
  double main_span_deg = 10.0;   // fine zone half-width
  double main_step_deg = 0.05;   // cut and fine-quadrature resolution
  double quad_theta_step_deg = 0.5;
  double quad_phi_step_deg = 1.0;
  std::vector<double> cut_phi_deg = {0.0, 90.0};
  int n_threads = 1;

  void validate() const;
};

struct PowerBudget {
  double eta_spillover = 1.0;
  double eta_radiation = 1.0;  // user-supplied ohmic/dielectric factor
  double aperture_d_mm = 192.0;
};

struct EfficiencyBreakdown {
  double d_uniform_dbi = 0.0;   // 4 pi A / lambda^2 for the square aperture
  double eta_pattern = 1.0;     // directivity / uniform (taper + phase)
  double eta_spillover = 1.0;
  double eta_capture = 1.0;     // polarizer chain + conversion, exact
  double eta_mpg_chain = 1.0;   // nominal |r_parallel t_perp|^2
  double eta_conversion = 1.0;  // eta_capture / eta_mpg_chain
  double eta_radiation = 1.0;
};

struct PatternMetrics {
  double freq_ghz = 0.0;
  double directivity_dbi = 0.0;
  double realized_gain_dbi = 0.0;
  double hpbw_xoz_deg = 0.0;
  double hpbw_yoz_deg = 0.0;
  double sll_db = 0.0;   // worst sidelobe over the principal cuts
  double xpol_db = 0.0;  // peak cross-polar level relative to the co peak
  double peak_theta_xoz_deg = 0.0;
  double peak_theta_yoz_deg = 0.0;
  double aperture_efficiency = 0.0;  // G lambda^2 / (4 pi D^2)
  EfficiencyBreakdown breakdown;
};

// Directivity by full-hemisphere quadrature, HPBW by bisection on each cut,
// SLL outside the null-to-null main beam, realized gain from the budget.
// Throws std::runtime_error when the main beam is not resolved.
PatternMetrics metrics(const ApertureField& ap, const PowerBudget& budget,
                       const MetricsOptions& opt = {});

// G lambda^2 / (4 pi D^2) for a square aperture of side d.
double aperture_efficiency_from_gain(double gain_dbi, Frequency f,
                                     double aperture_d_mm);

struct BandSweepResult {
  std::vector<double> freq_ghz;
  std::vector<PatternMetrics> per_freq;
  double peak_gain_dbi = 0.0;
  double peak_freq_ghz = 0.0;
  double bw3db_percent = 0.0;
  double bw1db_percent = 0.0;
  bool truncated_3db = false;  // crossing ran past the sweep boundary
  bool truncated_1db = false;
};

// Gain versus frequency with -1 dB and -3 dB bandwidths found by linear
// interpolation between samples, in percent of the band-centre frequency.
BandSweepResult band_sweep(const DesignedAperture& design,
                           const FeedModel& feed, const MpgModel& mpg,
                           const PhaseSource& source,
                           const std::vector<double>& f_list_ghz,
                           const PowerBudget& budget,
                           const MetricsOptions& opt = {});

// Test/diagnostic helper: uniformly excited square aperture sampled on a
// regular grid (co amplitude 1, no cross component).
ApertureField uniform_square_field(double side_mm, double spacing_mm,
                                   Frequency f);

}  // namespace mfra

#endif
