#include <doctest.h>

#include <cmath>
#include <random>

#include "seld/angles.hpp"

using namespace seld;

TEST_CASE("sin_deg and cos_deg are exact on the axes") {
  for (int k = -8; k <= 8; ++k) {
    const double deg = 90.0 * k;
    const double s = sin_deg(deg), c = cos_deg(deg);
    CHECK((s == 0.0 || s == 1.0 || s == -1.0));
    CHECK((c == 0.0 || c == 1.0 || c == -1.0));
    CHECK(s * s + c * c == 1.0);
  }
  CHECK(sin_deg(30.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cos_deg(-120.0) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("wrap_azimuth maps onto [-180, 180)") {
  CHECK(wrap_azimuth(180.0) == -180.0);
  CHECK(wrap_azimuth(-180.0) == -180.0);
  CHECK(wrap_azimuth(190.0) == doctest::Approx(-170.0));
  CHECK(wrap_azimuth(-190.0) == doctest::Approx(170.0));
  CHECK(wrap_azimuth(720.0 + 45.0) == doctest::Approx(45.0));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1000.0, 1000.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = dist(rng);
    const double w = wrap_azimuth(a);
    CHECK(w >= -180.0);
    CHECK(w < 180.0);
    CHECK(std::remainder(a - w, 360.0) == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("angular_distance on reference directions") {
  CHECK(angular_distance(Direction{0, 0}, Direction{0, 0}) == 0.0);
  CHECK(angular_distance(Direction{0, 0}, Direction{180, 0}) == doctest::Approx(180.0));
  CHECK(angular_distance(Direction{0, 0}, Direction{90, 0}) == doctest::Approx(90.0));
  CHECK(angular_distance(Direction{10, 90}, Direction{-70, 90}) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("angular_distance agrees with the clamped arccos form") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> az(-180.0, 180.0), el(-90.0, 90.0);
  for (int i = 0; i < 2000; ++i) {
    const Direction a{az(rng), el(rng)}, b{az(rng), el(rng)};
    const Vec3 ua = to_unit_vector(a), ub = to_unit_vector(b);
    const double c = std::clamp(dot(ua, ub), -1.0, 1.0);
    CHECK(angular_distance(a, b) == doctest::Approx(std::acos(c) * kRadToDeg).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("to_direction inverts to_unit_vector") {
  for (double a = -180.0; a < 180.0; a += 7.5) {
    for (double e = -85.0; e <= 85.0; e += 8.5) {
      const Direction d = to_direction(to_unit_vector({a, e}));
      CHECK(d.azimuth == doctest::Approx(a).epsilon(1e-12).scale(1.0));
      CHECK(d.elevation == doctest::Approx(e).epsilon(1e-12).scale(1.0));
    }
  }
  CHECK(normalized(Vec3{}) == Vec3{});
}
