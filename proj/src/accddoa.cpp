#include "seld/accddoa.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "seld/angles.hpp"
#include "seld/error.hpp"
#include "text_util.hpp"

namespace seld {

namespace {

const std::array<std::string, kNumClasses> kClassNames = {
    "Female speech", "Male speech", "Clapping", "Telephone", "Laughter", "Domestic sounds", "Walk/footsteps",
    "Door open/close", "Music", "Musical instrument", "Water tap", "Bell", "Knock"};

std::string class_key(const std::string& text) {
  std::string key;
  for (char c : text) {
    if (c == ' ' || c == '_' || c == '/' || c == '-') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return key;
}

struct Group {
  Vec3 sum;
  double distance_sum = 0.0;
  int count = 0;
  Vec3 direction() const { return normalized(sum); }
};

}  // namespace

const std::array<std::string, kNumClasses>& class_names() { return kClassNames; }

int parse_class(const std::string& text) {
  const std::string key = class_key(text);
  if (!key.empty() && std::all_of(key.begin(), key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    const int id = detail::parse_int(key, "class");
    if (id < 0 || id >= kNumClasses) throw Error("class_id out of range: " + key);
    return id;
  }
  for (int c = 0; c < kNumClasses; ++c) {
    if (class_key(kClassNames[static_cast<std::size_t>(c)]) == key) return c;
  }
  throw Error("unknown class '" + text + "'");
}

void DecodeConfig::validate() const {
  if (!(activity_threshold > 0.0 && activity_threshold < 1.0)) throw Error("decode.threshold must be in (0, 1)");
  if (!(merge_angle > 0.0)) throw Error("decode.merge_angle must be > 0");
}

std::vector<AccddoaVector> encode(const EventList& events, int num_frames) {
  if (num_frames < 0) throw Error("negative frame count");
  std::vector<AccddoaVector> out(static_cast<std::size_t>(num_frames));
  for (auto& v : out) v.fill(0.0);

  std::vector<std::vector<const Event*>> slots(static_cast<std::size_t>(num_frames) * kNumClasses);
  for (const Event& e : events) {
    if (e.frame < 0 || e.frame >= num_frames) {
      throw Error("event frame " + std::to_string(e.frame) + " outside [0, " + std::to_string(num_frames) + ")");
    }
    if (e.class_id < 0 || e.class_id >= kNumClasses) {
      throw Error("frame " + std::to_string(e.frame) + ": class_id out of range: " + std::to_string(e.class_id));
    }
    slots[static_cast<std::size_t>(e.frame) * kNumClasses + static_cast<std::size_t>(e.class_id)].push_back(&e);
  }
  for (int f = 0; f < num_frames; ++f) {
    for (int c = 0; c < kNumClasses; ++c) {
      auto& active = slots[static_cast<std::size_t>(f) * kNumClasses + static_cast<std::size_t>(c)];
      if (active.empty()) continue;
      if (active.size() > static_cast<std::size_t>(kMaxTracks)) {
        throw Error("frame " + std::to_string(f) + ", class " + std::to_string(c) + ": " +
                    std::to_string(active.size()) + " simultaneous events exceed " + std::to_string(kMaxTracks) +
                    " tracks");
      }
      std::sort(active.begin(), active.end(), [](const Event* a, const Event* b) {
        if (a->source_id != b->source_id) return a->source_id < b->source_id;
        if (a->azimuth != b->azimuth) return a->azimuth < b->azimuth;
        if (a->elevation != b->elevation) return a->elevation < b->elevation;
        return a->distance < b->distance;
      });
      auto& vec = out[static_cast<std::size_t>(f)];
      for (std::size_t k = 0; k < active.size(); ++k) {
        const Vec3 u = to_unit_vector({active[k]->azimuth, active[k]->elevation});
        const int track = static_cast<int>(k);
        vec[accddoa_index(track, c, 0)] = u.x;
        vec[accddoa_index(track, c, 1)] = u.y;
        vec[accddoa_index(track, c, 2)] = u.z;
        vec[accddoa_index(track, c, 3)] = active[k]->distance;
      }
    }
  }
  return out;
}

EventList decode(const AccddoaVector& vec, const DecodeConfig& config, int frame) {
  config.validate();
  EventList out;
  for (int c = 0; c < kNumClasses; ++c) {
    std::vector<Group> groups;
    for (int track = 0; track < kMaxTracks; ++track) {
      const Vec3 v{vec[accddoa_index(track, c, 0)], vec[accddoa_index(track, c, 1)], vec[accddoa_index(track, c, 2)]};
      if (!(norm(v) > config.activity_threshold)) continue;
      groups.push_back({normalized(v), std::max(vec[accddoa_index(track, c, 3)], 0.0), 1});
    }
    // Merge the closest pair of groups until none are within the merge angle.
    while (groups.size() > 1) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
          const double a = angular_distance(groups[i].direction(), groups[j].direction());
          if (a < best) {
            best = a;
            bi = i;
            bj = j;
          }
        }
      }
      if (!(best <= config.merge_angle)) break;
      groups[bi].sum = groups[bi].sum + groups[bj].sum;
      groups[bi].distance_sum += groups[bj].distance_sum;
      groups[bi].count += groups[bj].count;
      groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    EventList class_events;
    for (const Group& g : groups) {
      const Direction d = to_direction(g.direction());
      class_events.push_back({frame, c, 0, d.azimuth, d.elevation, g.distance_sum / g.count});
    }
    std::sort(class_events.begin(), class_events.end(), [](const Event& a, const Event& b) {
      return a.azimuth != b.azimuth ? a.azimuth < b.azimuth : a.elevation < b.elevation;
    });
    out.insert(out.end(), class_events.begin(), class_events.end());
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].source_id = static_cast<int>(i);
  return out;
}

std::vector<EventList> decode_all(const std::vector<AccddoaVector>& frames, const DecodeConfig& config) {
  std::vector<EventList> out(frames.size());
#pragma omp parallel for schedule(static)
  for (long f = 0; f < static_cast<long>(frames.size()); ++f) {
    out[static_cast<std::size_t>(f)] = decode(frames[static_cast<std::size_t>(f)], config, static_cast<int>(f));
  }
  return out;
}

Tensor3f to_tensor(const std::vector<AccddoaVector>& frames) {
  Tensor3f t(kAccddoaSize, frames.size(), 1);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (std::size_t k = 0; k < static_cast<std::size_t>(kAccddoaSize); ++k) t(k, f, 0) = static_cast<float>(frames[f][k]);
  }
  return t;
}

std::vector<AccddoaVector> from_tensor(const Tensor3f& tensor) {
  if (tensor.channels() != static_cast<std::size_t>(kAccddoaSize) || tensor.bins() != 1) {
    throw Error("ACCDDOA tensor must be " + std::to_string(kAccddoaSize) + " x T x 1, got " +
                std::to_string(tensor.channels()) + " x " + std::to_string(tensor.frames()) + " x " +
                std::to_string(tensor.bins()));
  }
  std::vector<AccddoaVector> frames(tensor.frames());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (std::size_t k = 0; k < static_cast<std::size_t>(kAccddoaSize); ++k) frames[f][k] = tensor(k, f, 0);
  }
  return frames;
}

void write_prediction_csv(std::ostream& out, const EventList& events) {
  for (const Event& e : events) {
    out << e.frame << ',' << e.class_id << ',' << detail::format_double(e.azimuth) << ','
        << detail::format_double(e.elevation) << ',' << detail::format_double(e.distance) << '\n';
  }
}

void write_prediction_csv(const std::filesystem::path& path, const EventList& events) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_prediction_csv(out, events);
}

EventList read_event_csv(const std::filesystem::path& path, DistanceUnit metadata_unit) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::size_t columns = 0;
  {
    std::istringstream probe(text);
    std::string line;
    while (std::getline(probe, line)) {
      if (detail::trim(line).empty()) continue;
      columns = detail::split_csv(line).size();
      break;
    }
  }
  std::istringstream body(text);
  if (columns != 5) return parse_metadata_csv(body, metadata_unit, path.string());

  EventList events;
  std::string line;
  int line_no = 0;
  while (std::getline(body, line)) {
    ++line_no;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != 5) throw Error(where + "expected 5 fields, got " + std::to_string(fields.size()));
    Event e;
    e.frame = detail::parse_int(fields[0], where + "frame");
    e.class_id = detail::parse_int(fields[1], where + "class");
    e.azimuth = detail::parse_double(fields[2], where + "azimuth");
    e.elevation = detail::parse_double(fields[3], where + "elevation");
    e.distance = detail::parse_double(fields[4], where + "distance");
    if (e.frame < 0) throw Error(where + "negative frame index");
    if (e.class_id < 0 || e.class_id >= kNumClasses) {
      throw Error(where + "class_id out of range: " + std::to_string(e.class_id));
    }
    if (!(e.azimuth >= -180.0 && e.azimuth <= 180.0)) throw Error(where + "azimuth out of range");
    if (e.azimuth == 180.0) e.azimuth = -180.0;
    if (!(e.elevation >= -90.0 && e.elevation <= 90.0)) throw Error(where + "elevation out of range");
    if (!std::isfinite(e.distance) || e.distance < 0.0) throw Error(where + "negative or non-finite distance");
    events.push_back(e);
  }
  sort_events(events);
  return events;
}

}  // namespace seld
