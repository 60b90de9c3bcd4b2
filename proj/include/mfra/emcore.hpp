#ifndef MFRA_EMCORE_HPP
#define MFRA_EMCORE_HPP

#include <Eigen/Dense>
#include <complex>

namespace mfra {

using Complex = std::complex<double>;

// Jones vector: complex field components along the global x and y axes.
using JonesVector = Eigen::Vector2cd;

// Jones operator: 2x2 complex matrix acting on (Ex, Ey) in the global basis.
using JonesMatrix = Eigen::Matrix2cd;

inline constexpr double kSpeedOfLight_mm_GHz = 299.792458;
inline constexpr double kPi = 3.14159265358979323846;

// Operating frequency in GHz. Lengths are millimetres everywhere in the
// library and frequencies stay in GHz, so all internal quantities match the
// units of mmWave design tables; conversions happen only at I/O boundaries.
struct Frequency {
  double ghz;
  explicit Frequency(double value_ghz);
};

// Free-space wavelength c/f in mm.
double wavelength_mm(Frequency f);

double deg2rad(double deg);
double rad2deg(double rad);

// Wraps a phase in degrees into [0, 360).
double wrap_deg(double phase_deg);

// Wraps a phase difference in degrees into (-180, 180].
double wrap_deg_pm180(double phase_deg);

// 10*log10 of a power ratio. Throws std::domain_error for ratio <= 0.
double db(double power_ratio);

// 20*log10 of an amplitude ratio. Throws std::domain_error for ratio <= 0.
double db_amplitude(double amplitude_ratio);

Complex from_polar_deg(double magnitude, double phase_deg);
double arg_deg(const Complex& z);

// Expresses a Jones operator in a basis rotated by alpha degrees:
// R(-alpha) * m * R(alpha) with the passive rotation
// R(a) = [[cos a, sin a], [-sin a, cos a]].
// Phase convention throughout the library: e^{+i phi} time dependence,
// phases reported in degrees.
JonesMatrix rotate_basis(const JonesMatrix& m, double alpha_deg);

}  // namespace mfra

#endif
