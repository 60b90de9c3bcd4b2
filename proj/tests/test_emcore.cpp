#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mfra/emcore.hpp"

using namespace mfra;

namespace {

// Independent 2x2 complex product for checking rotate_basis.
JonesMatrix mul_oracle(const JonesMatrix& a, const JonesMatrix& b) {
  JonesMatrix r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    }
  }
  return r;
}

JonesMatrix rotate_oracle(const JonesMatrix& m, double alpha_deg) {
  const double a = alpha_deg * kPi / 180.0;
  JonesMatrix rot, inv;
  rot << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
  inv << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return mul_oracle(inv, mul_oracle(m, rot));
}

}  // namespace

TEST_CASE("wavelength follows c/f") {
  CHECK(wavelength_mm(Frequency(28.0)) ==
        doctest::Approx(10.7069).epsilon(1e-4));
  CHECK(wavelength_mm(Frequency(29.0)) ==
        doctest::Approx(10.3377).epsilon(1e-4));
  CHECK(wavelength_mm(Frequency(29.9792458)) == doctest::Approx(10.0));
  CHECK_THROWS_AS(Frequency(0.0), std::domain_error);
  CHECK_THROWS_AS(Frequency(-3.0), std::domain_error);
}

TEST_CASE("complex magnitude and phase round-trip") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> mag(0.01, 2.0);
  std::uniform_real_distribution<double> ph(-720.0, 720.0);
  for (int i = 0; i < 500; ++i) {
    const double m = mag(rng);
    const double p = ph(rng);
    const Complex z = from_polar_deg(m, p);
    CHECK(std::abs(z) == doctest::Approx(m).epsilon(1e-12));
    CHECK(wrap_deg(arg_deg(z)) == doctest::Approx(wrap_deg(p)).epsilon(1e-9));
  }
}

TEST_CASE("rotate_basis identity stays identity") {
  const JonesMatrix r = rotate_basis(JonesMatrix::Identity(), 45.0);
  CHECK((r - JonesMatrix::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rotate_basis diag(1,-1) at 45 deg becomes antidiagonal ones") {
  JonesMatrix m = JonesMatrix::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  const JonesMatrix r = rotate_basis(m, 45.0);
  const JonesMatrix expect = rotate_oracle(m, 45.0);
  CHECK((r - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(r(0, 0)) < 1e-12);
  CHECK(std::abs(r(0, 1) - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(r(1, 0) - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(r(1, 1)) < 1e-12);
}

TEST_CASE("rotate_basis diag(1, i) at 45 deg has off-diagonal sqrt(2)/2") {
  JonesMatrix m = JonesMatrix::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = from_polar_deg(1.0, 90.0);
  const JonesMatrix r = rotate_basis(m, 45.0);
  const JonesMatrix expect = rotate_oracle(m, 45.0);
  CHECK((r - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(r(0, 1)) == doctest::Approx(0.7071).epsilon(1e-4));
}

TEST_CASE("rotate_basis round-trips and preserves unitary-diagonal norm") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ang(-180.0, 180.0);
  for (int i = 0; i < 300; ++i) {
    JonesMatrix m;
    m << Complex(u(rng), u(rng)), Complex(u(rng), u(rng)),
        Complex(u(rng), u(rng)), Complex(u(rng), u(rng));
    const double alpha = ang(rng);
    const JonesMatrix back = rotate_basis(rotate_basis(m, alpha), -alpha);
    CHECK((back - m).cwiseAbs().maxCoeff() < 1e-12);

    JonesMatrix d = JonesMatrix::Zero();
    d(0, 0) = from_polar_deg(1.0, ang(rng));
    d(1, 1) = from_polar_deg(1.0, ang(rng));
    const double n0 = d.norm();
    CHECK(rotate_basis(d, alpha).norm() == doctest::Approx(n0).epsilon(1e-12));
  }
}

TEST_CASE("decibel helpers") {
  CHECK(db(0.5) == doctest::Approx(-3.0103).epsilon(1e-4));
  CHECK(db_amplitude(0.0834) == doctest::Approx(-21.5767).epsilon(1e-4));
  CHECK_THROWS_AS(db(0.0), std::domain_error);
  CHECK_THROWS_AS(db(-1.0), std::domain_error);
  CHECK_THROWS_AS(db_amplitude(0.0), std::domain_error);
}

TEST_CASE("wrap_deg lands in [0, 360) and is 360-periodic") {
  CHECK(wrap_deg(2608.6) == doctest::Approx(88.6).epsilon(1e-9));
  CHECK(wrap_deg(0.0) == 0.0);
  CHECK(wrap_deg(-0.0) == 0.0);
  CHECK(wrap_deg(360.0) == 0.0);
  CHECK(wrap_deg(-1e-18) >= 0.0);
  CHECK(wrap_deg(-1e-18) < 360.0);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> x(-1000.0, 1000.0);
  std::uniform_int_distribution<int> k(-5, 5);
  for (int i = 0; i < 1000; ++i) {
    const double v = x(rng);
    const double w = wrap_deg(v);
    CHECK(w >= 0.0);
    CHECK(w < 360.0);
    const double w2 = wrap_deg(v + 360.0 * k(rng));
    CHECK(std::abs(w2 - w) < 1e-9);
  }
}
