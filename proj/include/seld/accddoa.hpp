#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seld/foa_io.hpp"
#include "seld/tensor.hpp"

namespace seld {

inline constexpr int kAccddoaValues = 4;  // x, y, z, distance
inline constexpr int kAccddoaSize = kMaxTracks * kNumClasses * kAccddoaValues;

// Flattened [track][class][x, y, z, distance].
using AccddoaVector = std::array<double, kAccddoaSize>;

constexpr std::size_t accddoa_index(int track, int class_id, int value) {
  return static_cast<std::size_t>((track * kNumClasses + class_id) * kAccddoaValues + value);
}

const std::array<std::string, kNumClasses>& class_names();
// Accepts a class index or a name; case, spaces, '_' and '/' are ignored,
// so "watertap", "Water tap" and "10" all resolve to 10.
int parse_class(const std::string& text);

struct DecodeConfig {
  double activity_threshold = 0.5;
  double merge_angle = 15.0;  // degrees

  void validate() const;
};

// Frames outside [0, num_frames) and more than kMaxTracks same-class events in
// one frame are errors.
std::vector<AccddoaVector> encode(const EventList& events, int num_frames);

// Events of one frame, sorted by class then azimuth. Source ids number the
// output events within the frame.
EventList decode(const AccddoaVector& vec, const DecodeConfig& config, int frame = 0);
std::vector<EventList> decode_all(const std::vector<AccddoaVector>& frames, const DecodeConfig& config);

// Tensor file view: channels = 156, frames, bins = 1.
Tensor3f to_tensor(const std::vector<AccddoaVector>& frames);
std::vector<AccddoaVector> from_tensor(const Tensor3f& tensor);

// Prediction rows are `frame,class,azimuth,elevation,distance_m`.
void write_prediction_csv(std::ostream& out, const EventList& events);
void write_prediction_csv(const std::filesystem::path& path, const EventList& events);
// Reads either 5-column prediction rows (distance in meters) or 6-column
// metadata rows (distance in `metadata_unit`); the column count of the first
// row decides.
EventList read_event_csv(const std::filesystem::path& path, DistanceUnit metadata_unit);

}  // namespace seld
