#include "seld/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seld/error.hpp"

namespace seld {

std::optional<CubemapCoord> dir_to_cubemap(Direction d) {
  for (int f = 0; f < kNumHorizontalFaces; ++f) {
    const double delta = wrap_azimuth(d.azimuth - kFaceCenterAzimuth[static_cast<std::size_t>(f)]);
    if (!(delta > -45.0 && delta <= 45.0)) continue;
    const double cos_delta = std::cos(delta * kDegToRad);
    if (std::abs(d.elevation) >= 90.0) return std::nullopt;
    const double t = std::tan(d.elevation * kDegToRad) / cos_delta;
    if (t > 1.0 || t <= -1.0) return std::nullopt;
    return CubemapCoord{static_cast<CubeFace>(f), 0.5 - 0.5 * std::tan(delta * kDegToRad), 0.5 - 0.5 * t};
  }
  return std::nullopt;
}

Direction cubemap_to_dir(CubeFace face, double u, double v) {
  const double a = 1.0 - 2.0 * u;
  const double b = 1.0 - 2.0 * v;
  const double az = kFaceCenterAzimuth[static_cast<std::size_t>(face)] + std::atan(a) * kRadToDeg;
  const double el = std::atan(b / std::sqrt(1.0 + a * a)) * kRadToDeg;
  return {wrap_azimuth(az), el};
}

double sample_bilinear(const Image& image, double x, double y, int k) {
  const int w = image.width, h = image.height;
  const double fx = std::floor(x), fy = std::floor(y);
  const double ax = x - fx, ay = y - fy;
  const auto wrap = [w](long c) { return static_cast<int>(((c % w) + w) % w); };
  const auto clamp = [h](long r) { return static_cast<int>(std::clamp<long>(r, 0, h - 1)); };
  const int x0 = wrap(static_cast<long>(fx)), x1 = wrap(static_cast<long>(fx) + 1);
  const int y0 = clamp(static_cast<long>(fy)), y1 = clamp(static_cast<long>(fy) + 1);
  const double top = (1.0 - ax) * image.at(x0, y0, k) + ax * image.at(x1, y0, k);
  const double bottom = (1.0 - ax) * image.at(x0, y1, k) + ax * image.at(x1, y1, k);
  return (1.0 - ay) * top + ay * bottom;
}

Image equirect_to_cubemap(const Image& equirect, int face_size) {
  if (face_size <= 0) throw Error("face size must be positive");
  if (equirect.width <= 0 || equirect.width != 2 * equirect.height) {
    throw Error("equirectangular frame must be 2:1, got " + std::to_string(equirect.width) + "x" +
                std::to_string(equirect.height));
  }
  const int w = equirect.width, h = equirect.height, ch = equirect.channels;
  Image out(kNumHorizontalFaces * face_size, face_size, ch);
  const int rows = kNumHorizontalFaces * face_size;
#pragma omp parallel for schedule(static)
  for (int job = 0; job < rows; ++job) {
    const int f = job / face_size;
    const int j = job % face_size;
    const double v = (j + 0.5) / face_size;
    for (int i = 0; i < face_size; ++i) {
      const Direction d = cubemap_to_dir(static_cast<CubeFace>(f), (i + 0.5) / face_size, v);
      const double x = (180.0 - d.azimuth) * w / 360.0 - 0.5;
      const double y = (90.0 - d.elevation) * h / 180.0 - 0.5;
      for (int k = 0; k < ch; ++k) {
        const double value = sample_bilinear(equirect, x, y, k);
        out.at(f * face_size + i, j, k) = static_cast<std::uint8_t>(std::clamp<long>(std::lround(value), 0, 255));
      }
    }
  }
  return out;
}

}  // namespace seld
