#pragma once

#include <array>
#include <optional>

#include "seld/angles.hpp"
#include "seld/image.hpp"

namespace seld {

enum class CubeFace { left = 0, front = 1, right = 2, back = 3 };

inline constexpr int kNumHorizontalFaces = 4;
inline constexpr int kDefaultFaceSize = 224;

// Azimuth at the centre of each face, in strip order.
inline constexpr std::array<double, kNumHorizontalFaces> kFaceCenterAzimuth = {90.0, 0.0, -90.0, 180.0};

struct CubemapCoord {
  CubeFace face = CubeFace::front;
  double u = 0.5;  // [0, 1), grows to the right (decreasing azimuth)
  double v = 0.5;  // [0, 1), grows downwards
};

// Gnomonic projection onto the horizontal face whose sector
// (center - 45, center + 45] contains the azimuth. Empty when the direction
// leaves through the top or bottom face.
std::optional<CubemapCoord> dir_to_cubemap(Direction d);
Direction cubemap_to_dir(CubeFace face, double u, double v);

// Bilinear sample of channel k at continuous pixel coordinates, wrapping
// horizontally and clamping vertically.
double sample_bilinear(const Image& image, double x, double y, int k);

// Left, front, right and back faces side by side: (4 * face_size) x face_size.
Image equirect_to_cubemap(const Image& equirect, int face_size = kDefaultFaceSize);

}  // namespace seld
