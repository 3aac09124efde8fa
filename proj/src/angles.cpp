#include "seld/angles.hpp"

#include <cmath>

namespace seld {

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(Vec3 a) {
  const double n = norm(a);
  if (n == 0.0) return a;
  return (1.0 / n) * a;
}

namespace {

// Splits x into k*90 + r with r in [-45, 45] so that quadrant multiples are
// handled by exact sign/swap instead of rounding pi.
struct QuadrantSplit {
  int quadrant;  // 0..3
  double remainder_rad;
};

QuadrantSplit split_quadrant(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  const double k = std::round(r / 90.0);
  const double rem = r - 90.0 * k;
  return {static_cast<int>(k) % 4, rem * kDegToRad};
}

}  // namespace

double sin_deg(double degrees) {
  const auto [q, rem] = split_quadrant(degrees);
  switch (q) {
    case 0: return std::sin(rem);
    case 1: return std::cos(rem);
    case 2: return -std::sin(rem);
    default: return -std::cos(rem);
  }
}

double cos_deg(double degrees) {
  const auto [q, rem] = split_quadrant(degrees);
  switch (q) {
    case 0: return std::cos(rem);
    case 1: return -std::sin(rem);
    case 2: return -std::cos(rem);
    default: return std::sin(rem);
  }
}

double wrap_azimuth(double degrees) {
  double a = std::fmod(degrees + 180.0, 360.0);
  if (a < 0.0) a += 360.0;
  a -= 180.0;
  if (a >= 180.0) a -= 360.0;
  return a;
}

Vec3 to_unit_vector(Direction d) {
  const double ce = cos_deg(d.elevation);
  return {ce * cos_deg(d.azimuth), ce * sin_deg(d.azimuth), sin_deg(d.elevation)};
}

Direction to_direction(Vec3 v) {
  const double horizontal = std::hypot(v.x, v.y);
  const double az = horizontal == 0.0 ? 0.0 : std::atan2(v.y, v.x) * kRadToDeg;
  return {wrap_azimuth(az), std::atan2(v.z, horizontal) * kRadToDeg};
}

double angular_distance(Vec3 a, Vec3 b) {
  return std::atan2(norm(cross(a, b)), dot(a, b)) * kRadToDeg;
}

double angular_distance(Direction a, Direction b) {
  return angular_distance(to_unit_vector(a), to_unit_vector(b));
}

}  // namespace seld
