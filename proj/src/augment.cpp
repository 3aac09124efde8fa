#include "seld/augment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seld/error.hpp"

namespace seld {

namespace {

constexpr SignedAxis px{Axis::X, 1}, nx{Axis::X, -1};
constexpr SignedAxis py{Axis::Y, 1}, ny{Axis::Y, -1};
constexpr SignedAxis pz{Axis::Z, 1}, nz{Axis::Z, -1};

const std::array<AcsTransform, kNumAcsTransforms> kTable = {{
    {0, 1, -90.0, -1, {{py, nx, nz}}},
    {1, -1, -90.0, 1, {{ny, nx, pz}}},
    {2, 1, 0.0, 1, {{px, py, pz}}},
    {3, -1, 0.0, -1, {{px, ny, nz}}},
    {4, 1, 90.0, -1, {{ny, px, nz}}},
    {5, -1, 90.0, 1, {{py, px, pz}}},
    {6, 1, 180.0, 1, {{nx, ny, pz}}},
    {7, -1, 180.0, -1, {{nx, py, nz}}},
}};

FoaChannel foa_channel(Axis a) {
  switch (a) {
    case Axis::X: return FoaChannel::X;
    case Axis::Y: return FoaChannel::Y;
    case Axis::Z: return FoaChannel::Z;
  }
  return FoaChannel::X;
}

double component(Vec3 v, Axis a) {
  return a == Axis::X ? v.x : a == Axis::Y ? v.y : v.z;
}

void check_equirect(int width, int height) {
  if (width <= 0 || height <= 0) throw Error("empty equirectangular frame");
  if (width % 2 != 0) throw Error("equirectangular frame width must be even, got " + std::to_string(width));
  if (width != 2 * height) {
    throw Error("equirectangular frame must be 2:1, got " + std::to_string(width) + "x" + std::to_string(height));
  }
  if (width % 4 != 0) throw Error("equirectangular frame width must be divisible by 4, got " + std::to_string(width));
}

}  // namespace

const std::array<AcsTransform, kNumAcsTransforms>& acs_table() { return kTable; }

const AcsTransform& acs_transform(int id) {
  if (id < 0 || id >= kNumAcsTransforms) throw Error("transform id must be in 0..7, got " + std::to_string(id));
  return kTable[static_cast<std::size_t>(id)];
}

Direction acs_direction(Direction d, const AcsTransform& t) {
  return {wrap_azimuth(t.azimuth_sign * d.azimuth + t.azimuth_offset), t.elevation_sign * d.elevation};
}

Vec3 acs_vector(Vec3 v, const AcsTransform& t) {
  const auto& op = t.channel_op;
  return {op[0].sign * component(v, op[0].axis), op[1].sign * component(v, op[1].axis),
          op[2].sign * component(v, op[2].axis)};
}

FoaClip acs_audio(const FoaClip& clip, const AcsTransform& t) {
  FoaClip out = clip;
  const Axis outputs[3] = {Axis::X, Axis::Y, Axis::Z};
  for (int k = 0; k < 3; ++k) {
    const SignedAxis& src = t.channel_op[static_cast<std::size_t>(k)];
    const auto in = clip.channel(foa_channel(src.axis));
    auto dst = out.channel(foa_channel(outputs[k]));
    const float sign = static_cast<float>(src.sign);
    for (std::size_t i = 0; i < in.size(); ++i) dst[i] = sign * in[i];
  }
  return out;
}

EventList acs_labels(const EventList& events, const AcsTransform& t) {
  EventList out = events;
  for (Event& e : out) {
    const Direction d = acs_direction({e.azimuth, e.elevation}, t);
    e.azimuth = d.azimuth;
    e.elevation = d.elevation;
  }
  sort_events(out);
  return out;
}

Pixel equirect_pixel(Direction d, int width, int height) {
  const int col = static_cast<int>(std::floor((180.0 - d.azimuth) * width / 360.0));
  const int row = static_cast<int>(std::floor((90.0 - d.elevation) * height / 180.0));
  return {std::clamp(col, 0, width - 1), std::clamp(row, 0, height - 1)};
}

Direction equirect_direction(Pixel p, int width, int height) {
  return {180.0 - 360.0 * (p.col + 0.5) / width, 90.0 - 180.0 * (p.row + 0.5) / height};
}

Image avcs_frame(const Image& image, const AcsTransform& t) {
  check_equirect(image.width, image.height);
  if (t.is_identity()) return image;
  const int w = image.width, h = image.height, ch = image.channels;
  // Azimuth grows leftwards, so adding an offset moves content to lower columns.
  const int shift = static_cast<int>(std::lround(t.azimuth_offset * w / 360.0));
  Image out(w, h, ch);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    const int dst_row = t.elevation_sign < 0 ? h - 1 - r : r;
    for (int c = 0; c < w; ++c) {
      const int flipped = t.azimuth_sign < 0 ? w - 1 - c : c;
      const int dst_col = ((flipped - shift) % w + w) % w;
      for (int k = 0; k < ch; ++k) out.at(dst_col, dst_row, k) = image.at(c, r, k);
    }
  }
  return out;
}

}  // namespace seld
