#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace seld {

inline constexpr int kPipelineSampleRate = 24000;
inline constexpr int kNumClasses = 13;
inline constexpr int kMaxTracks = 3;
inline constexpr int kLabelFps = 10;

// Ambisonic channel number order with SN3D normalization. Downstream code
// addresses channels by name so the storage order lives here only.
enum class FoaChannel : std::size_t { W = 0, Y = 1, Z = 2, X = 3 };

struct FoaClip {
  int sample_rate = kPipelineSampleRate;
  std::array<std::vector<float>, 4> channels;  // W, Y, Z, X

  std::size_t num_samples() const { return channels[0].size(); }

  std::span<const float> channel(FoaChannel c) const {
    return channels[static_cast<std::size_t>(c)];
  }
  std::span<float> channel(FoaChannel c) {
    return channels[static_cast<std::size_t>(c)];
  }

  static FoaClip zeros(std::size_t num_samples, int sample_rate = kPipelineSampleRate);

  // Equal channel lengths, pipeline sample rate, finite samples.
  void validate() const;
};

// Reads RIFF/WAVE with PCM16, PCM24, PCM32, or float32 samples
// (plain or WAVE_FORMAT_EXTENSIBLE). Integer PCM is scaled to [-1, 1].
FoaClip read_foa_wav(const std::filesystem::path& path);
// Always writes 32-bit float samples.
void write_foa_wav(const std::filesystem::path& path, const FoaClip& clip);

struct Event {
  int frame = 0;  // label frame, 100 ms units
  int class_id = 0;
  int source_id = 0;
  double azimuth = 0.0;    // degrees, [-180, 180)
  double elevation = 0.0;  // degrees, [-90, 90]
  double distance = 0.0;   // meters

  friend bool operator==(const Event&, const Event&) = default;
};

using EventList = std::vector<Event>;

enum class DistanceUnit { cm, m };

DistanceUnit parse_distance_unit(const std::string& text);
std::string to_string(DistanceUnit unit);

// Rows are `frame,class,source,azimuth,elevation,distance`. Distances are
// converted to meters and rows sorted by (frame, class_id, source_id).
// An azimuth of exactly 180 is accepted and stored as -180.
EventList read_metadata_csv(const std::filesystem::path& path, DistanceUnit unit);
EventList parse_metadata_csv(std::istream& in, DistanceUnit unit, const std::string& source_name);
void write_metadata_csv(std::ostream& out, const EventList& events, DistanceUnit unit);
void write_metadata_csv(const std::filesystem::path& path, const EventList& events, DistanceUnit unit);

void sort_events(EventList& events);

struct ChunkSpec {
  double length_s = 3.0;
  double hop_s = 1.0;
  int label_fps = kLabelFps;

  void validate() const;
  int label_frames() const;  // label_fps * length_s
};

struct Chunk {
  double start_s = 0.0;
  double end_s = 0.0;
  friend bool operator==(const Chunk&, const Chunk&) = default;
};

// [k*hop, k*hop + length] for every k with end <= total. Trailing partial
// chunks are dropped.
std::vector<Chunk> chunk_indices(double total_s, const ChunkSpec& spec);

// Events with start*fps <= frame < end*fps, re-based to chunk-local frames.
EventList slice_events(const EventList& events, double start_s, double end_s,
                       int label_fps = kLabelFps);

// Splits a flat list into per-frame lists of length num_frames.
std::vector<EventList> group_by_frame(const EventList& events, int num_frames);
EventList flatten_frames(const std::vector<EventList>& frames);

}  // namespace seld
