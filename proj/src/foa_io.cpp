#include "seld/foa_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "seld/error.hpp"
#include "text_util.hpp"

namespace seld {

FoaClip FoaClip::zeros(std::size_t num_samples, int sample_rate) {
  FoaClip clip;
  clip.sample_rate = sample_rate;
  for (auto& ch : clip.channels) ch.assign(num_samples, 0.0f);
  return clip;
}

void FoaClip::validate() const {
  const std::size_t n = channels[0].size();
  for (const auto& ch : channels) {
    if (ch.size() != n) throw Error("FOA clip channels have different lengths");
  }
  if (sample_rate != kPipelineSampleRate) {
    throw Error("expected sample rate " + std::to_string(kPipelineSampleRate) + " Hz, got " +
                std::to_string(sample_rate));
  }
  for (std::size_t c = 0; c < channels.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(channels[c][i])) {
        throw Error("non-finite sample at channel " + std::to_string(c) + ", index " +
                    std::to_string(i));
      }
    }
  }
}

// ---------------------------------------------------------------- WAV

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

static_assert(std::endian::native == std::endian::little,
              "WAV and tensor IO assume a little-endian host");

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

FoaClip read_foa_wav(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(where + "malformed header (not a RIFF/WAVE file)");
  }

  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  bool have_fmt = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Some writers leave a bogus size on a trailing data chunk; clamp it.
      if (std::memcmp(chunk, "data", 4) != 0) throw Error(where + "malformed header (truncated chunk)");
    }
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw Error(where + "malformed header (short fmt chunk)");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      sample_rate = read_u32(chunk + 12);
      block_align = read_u16(chunk + 20);
      bits = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (avail < 26) throw Error(where + "malformed header (short extensible fmt)");
        format = read_u16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = avail;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || data == nullptr) throw Error(where + "malformed header (missing fmt or data chunk)");
  if (channels != 4) throw Error(where + "expected 4 channels, got " + std::to_string(channels));
  if (static_cast<int>(sample_rate) != kPipelineSampleRate) {
    throw Error(where + "expected sample rate 24000 Hz, got " + std::to_string(sample_rate));
  }
  const bool supported = (format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32)) ||
                         (format == kFormatFloat && bits == 32);
  if (!supported) {
    throw Error(where + "unsupported sample format " + std::to_string(format) + "/" +
                std::to_string(bits) + " bit");
  }
  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != bytes_per_sample * channels) throw Error(where + "malformed header (block align)");

  const std::size_t frames = data_size / block_align;
  FoaClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  for (auto& ch : clip.channels) ch.resize(frames);

  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < 4; ++c) {
      const unsigned char* p = data + i * block_align + c * bytes_per_sample;
      float v = 0.0f;
      if (format == kFormatFloat) {
        std::uint32_t raw = read_u32(p);
        v = std::bit_cast<float>(raw);
      } else if (bits == 16) {
        v = static_cast<float>(static_cast<std::int16_t>(read_u16(p))) / 32768.0f;
      } else if (bits == 24) {
        std::int32_t raw = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
        if (raw & 0x800000) raw -= 0x1000000;
        v = static_cast<float>(raw / 8388608.0);
      } else {
        v = static_cast<float>(static_cast<std::int32_t>(read_u32(p)) / 2147483648.0);
      }
      clip.channels[c][i] = v;
    }
  }
  clip.validate();
  return clip;
}

void write_foa_wav(const std::filesystem::path& path, const FoaClip& clip) {
  const std::size_t n = clip.num_samples();
  for (const auto& ch : clip.channels) {
    if (ch.size() != n) throw Error("cannot write " + path.string() + ": ragged channels");
  }
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(n * 4 * 4);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, kFormatFloat);
  put_u16(out, 4);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 16);
  put_u16(out, 16);
  put_u16(out, 32);
  out += "data";
  put_u32(out, data_bytes);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 4; ++c) put_u32(out, std::bit_cast<std::uint32_t>(clip.channels[c][i]));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error("write failed: " + path.string());
}

// ---------------------------------------------------------------- CSV

DistanceUnit parse_distance_unit(const std::string& text) {
  if (text == "cm") return DistanceUnit::cm;
  if (text == "m") return DistanceUnit::m;
  throw Error("unknown distance unit '" + text + "' (expected cm or m)");
}

std::string to_string(DistanceUnit unit) { return unit == DistanceUnit::cm ? "cm" : "m"; }

void sort_events(EventList& events) {
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.frame != b.frame) return a.frame < b.frame;
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    return a.source_id < b.source_id;
  });
}

EventList parse_metadata_csv(std::istream& in, DistanceUnit unit, const std::string& source_name) {
  EventList events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != 6) {
      throw Error(where + "expected 6 fields, got " + std::to_string(fields.size()));
    }
    Event e;
    e.frame = detail::parse_int(fields[0], where + "frame");
    e.class_id = detail::parse_int(fields[1], where + "class");
    e.source_id = detail::parse_int(fields[2], where + "source");
    e.azimuth = detail::parse_double(fields[3], where + "azimuth");
    e.elevation = detail::parse_double(fields[4], where + "elevation");
    e.distance = detail::parse_double(fields[5], where + "distance");
    if (e.frame < 0) throw Error(where + "negative frame index");
    if (e.class_id < 0 || e.class_id >= kNumClasses) {
      throw Error(where + "class_id out of range: " + std::to_string(e.class_id));
    }
    if (!(e.azimuth >= -180.0 && e.azimuth <= 180.0)) throw Error(where + "azimuth out of range");
    if (e.azimuth == 180.0) e.azimuth = -180.0;
    if (!(e.elevation >= -90.0 && e.elevation <= 90.0)) throw Error(where + "elevation out of range");
    if (!std::isfinite(e.distance) || e.distance < 0.0) throw Error(where + "negative or non-finite distance");
    if (unit == DistanceUnit::cm) e.distance /= 100.0;
    events.push_back(e);
  }
  sort_events(events);
  return events;
}

EventList read_metadata_csv(const std::filesystem::path& path, DistanceUnit unit) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_metadata_csv(in, unit, path.string());
}

void write_metadata_csv(std::ostream& out, const EventList& events, DistanceUnit unit) {
  for (const auto& e : events) {
    const double dist = unit == DistanceUnit::cm ? e.distance * 100.0 : e.distance;
    out << e.frame << ',' << e.class_id << ',' << e.source_id << ','
        << detail::format_double(e.azimuth) << ',' << detail::format_double(e.elevation) << ','
        << detail::format_double(dist) << '\n';
  }
}

void write_metadata_csv(const std::filesystem::path& path, const EventList& events, DistanceUnit unit) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_metadata_csv(out, events, unit);
}

// ---------------------------------------------------------------- chunks

namespace {

// Seconds to an integer count of label frames; rejects non-grid values.
long to_label_frames(double seconds, int fps, const char* what) {
  const double frames = seconds * fps;
  const double rounded = std::round(frames);
  if (std::abs(frames - rounded) > 1e-6) {
    throw Error(std::string(what) + " is not a multiple of the label frame period");
  }
  return static_cast<long>(rounded);
}

}  // namespace

void ChunkSpec::validate() const {
  if (!(length_s > 0.0)) throw Error("chunk length must be positive");
  if (!(hop_s > 0.0)) throw Error("chunk hop must be positive");
  if (label_fps <= 0) throw Error("label_fps must be positive");
  to_label_frames(length_s, label_fps, "chunk length");
  to_label_frames(hop_s, label_fps, "chunk hop");
}

int ChunkSpec::label_frames() const {
  return static_cast<int>(to_label_frames(length_s, label_fps, "chunk length"));
}

std::vector<Chunk> chunk_indices(double total_s, const ChunkSpec& spec) {
  spec.validate();
  // Work on the label-frame grid so that hop/length arithmetic is exact.
  const long length = to_label_frames(spec.length_s, spec.label_fps, "chunk length");
  const long hop = to_label_frames(spec.hop_s, spec.label_fps, "chunk hop");
  const long total = static_cast<long>(std::floor(total_s * spec.label_fps + 1e-6));
  if (total < length) {
    throw Error("sequence of " + std::to_string(total_s) + " s is shorter than one chunk");
  }
  const long count = (total - length) / hop + 1;
  std::vector<Chunk> chunks;
  chunks.reserve(static_cast<std::size_t>(count));
  const double fps = spec.label_fps;
  for (long k = 0; k < count; ++k) {
    chunks.push_back({static_cast<double>(k * hop) / fps, static_cast<double>(k * hop + length) / fps});
  }
  return chunks;
}

EventList slice_events(const EventList& events, double start_s, double end_s, int label_fps) {
  const long begin = std::lround(start_s * label_fps);
  const long end = std::lround(end_s * label_fps);
  EventList out;
  for (const auto& e : events) {
    if (e.frame >= begin && e.frame < end) {
      Event local = e;
      local.frame = static_cast<int>(e.frame - begin);
      out.push_back(local);
    }
  }
  return out;
}

std::vector<EventList> group_by_frame(const EventList& events, int num_frames) {
  std::vector<EventList> frames(static_cast<std::size_t>(std::max(num_frames, 0)));
  for (const auto& e : events) {
    if (e.frame < 0 || e.frame >= num_frames) {
      throw Error("event frame " + std::to_string(e.frame) + " outside [0, " +
                  std::to_string(num_frames) + ")");
    }
    frames[static_cast<std::size_t>(e.frame)].push_back(e);
  }
  return frames;
}

EventList flatten_frames(const std::vector<EventList>& frames) {
  EventList out;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    for (Event e : frames[t]) {
      e.frame = static_cast<int>(t);
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace seld
