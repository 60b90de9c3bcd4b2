#ifndef MFRA_POLARIZER_HPP
#define MFRA_POLARIZER_HPP

#include "mfra/emcore.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mfra {

struct MpgFrequencySample {
  double freq_ghz;
  Complex r_parallel;  // reflection for E parallel to the strips (y)
  Complex t_perp;      // transmission for E perpendicular to the strips (x)
};

// Strip-grid polarizer with strips along the global y axis: it mirrors
// y-polarized fields and passes x-polarized fields. Samples are linearly
// interpolated (magnitude and phase separately) inside the tabulated band;
// queries outside the band throw std::out_of_range.
class MpgModel {
 public:
  MpgModel(double strip_width_mm, double pitch_mm,
           std::vector<MpgFrequencySample> samples);

  // Flat-band model: r_parallel/t_perp magnitudes given in dB over
  // [band_lo, band_hi] GHz with mirror-reflection (180 deg) and free-pass
  // (0 deg) phases.
  static MpgModel flat(double ryy_db, double txx_db, double band_lo_ghz,
                       double band_hi_ghz, double strip_width_mm = 0.5,
                       double pitch_mm = 1.0);

  // The bundled prototype grid: -0.040 dB reflection, -0.18 dB transmission,
  // 0.5 mm strips on a 1 mm pitch, flat over 24-33 GHz.
  static MpgModel defaults();

  double strip_width_mm() const { return strip_width_; }
  double pitch_mm() const { return pitch_; }
  double band_lo_ghz() const;
  double band_hi_ghz() const;

  Complex r_parallel_at(Frequency f) const;
  Complex t_perp_at(Frequency f) const;

 private:
  double strip_width_;
  double pitch_;
  std::vector<MpgFrequencySample> samples_;  // sorted by frequency
};

// Reflection operator diag(r_leak_x, r_parallel): y mirrors off the strips,
// x mostly passes so only the lossless complement sqrt(1-|t_perp|^2)
// reflects.
JonesMatrix mpg_reflect_jones(const MpgModel& m, Frequency f);

// Transmission operator diag(t_perp, t_leak_y).
JonesMatrix mpg_transmit_jones(const MpgModel& m, Frequency f);

struct CascadeStage {
  std::string name;
  double loss_db;  // power lost at this interaction
};

struct CascadeBudget {
  Complex co_pol_output;    // x component after the final transmission
  Complex cross_leakage;    // y component leaking through the grid
  double co_pol_output_amp;
  double cross_leakage_amp;
  double trapped_power_fraction;  // power re-reflected by the grid, not traced
  double insertion_loss_db;       // -20 log10(co amplitude / input amplitude)
  std::vector<CascadeStage> stages;
};

// Three-interaction folded chain: grid reflection, element reflection, grid
// transmission. feed_state is expected normalized.
CascadeBudget folded_cascade(const JonesVector& feed_state, const MpgModel& mpg,
                             const JonesMatrix& element_jones, Frequency f);

// CSV schema: freq_ghz,ryy_db,txx_db with optional trailing columns
// ryy_phase_deg,txx_phase_deg (defaults 180 and 0).
MpgModel ingest_mpg_csv(std::istream& in, double strip_width_mm = 0.5,
                        double pitch_mm = 1.0);

}  // namespace mfra

#endif
