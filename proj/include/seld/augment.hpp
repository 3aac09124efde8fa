#pragma once

#include <array>
#include <vector>

#include "seld/angles.hpp"
#include "seld/foa_io.hpp"
#include "seld/image.hpp"

namespace seld {

enum class Axis { X = 0, Y = 1, Z = 2 };

struct SignedAxis {
  Axis axis = Axis::X;
  int sign = 1;
  friend bool operator==(const SignedAxis&, const SignedAxis&) = default;
};

// One audio channel swap. Angles map as
//   azimuth'   = wrap(azimuth_sign * azimuth + azimuth_offset)
//   elevation' = elevation_sign * elevation
// and output dipole k is sign * input dipole `axis` for k = X, Y, Z.
struct AcsTransform {
  int id = 2;
  int azimuth_sign = 1;
  double azimuth_offset = 0.0;  // degrees
  int elevation_sign = 1;
  std::array<SignedAxis, 3> channel_op{{{Axis::X, 1}, {Axis::Y, 1}, {Axis::Z, 1}}};

  bool is_identity() const { return id == 2; }
};

inline constexpr int kNumAcsTransforms = 8;

const std::array<AcsTransform, kNumAcsTransforms>& acs_table();
const AcsTransform& acs_transform(int id);

Direction acs_direction(Direction d, const AcsTransform& t);
Vec3 acs_vector(Vec3 v, const AcsTransform& t);
FoaClip acs_audio(const FoaClip& clip, const AcsTransform& t);
EventList acs_labels(const EventList& events, const AcsTransform& t);

// Equirectangular pixel convention: column c covers azimuth
// 180 - 360 (c + 0.5) / W at its centre, row r covers elevation
// 90 - 180 (r + 0.5) / H.
struct Pixel {
  int col = 0;
  int row = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

Pixel equirect_pixel(Direction d, int width, int height);
Direction equirect_direction(Pixel p, int width, int height);

// Horizontal flip, column roll and vertical flip; pixels move, values never
// change. Requires width == 2 * height and width divisible by 4.
Image avcs_frame(const Image& image, const AcsTransform& t);

}  // namespace seld
