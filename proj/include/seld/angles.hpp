#pragma once

#include <numbers>

namespace seld {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Direction in degrees. Azimuth is counter-clockwise from the front
// (x axis) towards the left (y axis); elevation is positive upwards.
struct Direction {
  double azimuth = 0.0;
  double elevation = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double dot(Vec3 a, Vec3 b);
Vec3 cross(Vec3 a, Vec3 b);
double norm(Vec3 a);
// Returns the zero vector unchanged.
Vec3 normalized(Vec3 a);

// sin/cos of an angle in degrees, exact at multiples of 90 degrees.
double sin_deg(double degrees);
double cos_deg(double degrees);

// Wraps to [-180, 180).
double wrap_azimuth(double degrees);

// (cos el cos az, cos el sin az, sin el)
Vec3 to_unit_vector(Direction d);
// Inverse of to_unit_vector for any non-zero vector; azimuth in [-180, 180).
Direction to_direction(Vec3 v);

// Great-circle angle in degrees, [0, 180]. Computed as atan2(|a x b|, a.b),
// which equals arccos of the clamped normalized dot product but keeps full
// precision for nearly parallel vectors.
double angular_distance(Vec3 a, Vec3 b);
double angular_distance(Direction a, Direction b);

}  // namespace seld
