#include "mfra/emcore.hpp"

#include <cmath>
#include <stdexcept>

namespace mfra {

Frequency::Frequency(double value_ghz) : ghz(value_ghz) {
  if (!(value_ghz > 0.0) || !std::isfinite(value_ghz)) {
    throw std::domain_error("frequency must be positive and finite, got " +
                            std::to_string(value_ghz) + " GHz");
  }
}

double wavelength_mm(Frequency f) { return kSpeedOfLight_mm_GHz / f.ghz; }

double deg2rad(double deg) { return deg * kPi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / kPi; }

double wrap_deg(double phase_deg) {
  double r = std::fmod(phase_deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;  // fmod result of -1e-18 rounds up to 360
  return r;
}

double wrap_deg_pm180(double phase_deg) {
  double r = wrap_deg(phase_deg);
  if (r > 180.0) r -= 360.0;
  return r;
}

double db(double power_ratio) {
  if (!(power_ratio > 0.0)) {
    throw std::domain_error("db() requires a positive power ratio");
  }
  return 10.0 * std::log10(power_ratio);
}

double db_amplitude(double amplitude_ratio) {
  if (!(amplitude_ratio > 0.0)) {
    throw std::domain_error("db_amplitude() requires a positive ratio");
  }
  return 20.0 * std::log10(amplitude_ratio);
}

Complex from_polar_deg(double magnitude, double phase_deg) {
  return std::polar(magnitude, deg2rad(phase_deg));
}

double arg_deg(const Complex& z) { return rad2deg(std::arg(z)); }

JonesMatrix rotate_basis(const JonesMatrix& m, double alpha_deg) {
  const double a = deg2rad(alpha_deg);
  const double c = std::cos(a);
  const double s = std::sin(a);
  JonesMatrix rot, inv;
  rot << c, s, -s, c;
  inv << c, -s, s, c;
  return inv * m * rot;
}

}  // namespace mfra
