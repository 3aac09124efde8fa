#include "seld/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "seld/error.hpp"
#include "text_util.hpp"

namespace seld {

namespace {

const std::vector<std::string> kKeys = {
    "sample_rate",      "stft.win",          "stft.hop",         "mel.bands",
    "mel.fmin",         "mel.fmax",          "wpe.taps",         "wpe.delay",
    "wpe.iterations",   "wpe.epsilon",       "wpe.regularization", "chunk.len",
    "chunk.hop_train",  "chunk.hop_eval",    "decode.threshold", "decode.merge_angle",
    "ensemble.angle",   "ensemble.min_votes", "ensemble.exceptions", "ensemble.exception_min_votes",
    "metrics.angle",    "metrics.rel_dist",  "distance_unit"};

std::set<int> parse_class_set(const std::string& text) {
  std::set<int> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto trimmed = detail::trim(item);
    if (trimmed.empty()) continue;
    out.insert(parse_class(std::string(trimmed)));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

void PipelineConfig::validate() const {
  if (sample_rate != kPipelineSampleRate) {
    throw Error("sample_rate must be " + std::to_string(kPipelineSampleRate) + " (resampling is not supported)");
  }
  if (features.stft.sample_rate != sample_rate) throw Error("stft sample rate differs from sample_rate");
  features.stft.validate();
  if (features.mel_bands < 1) throw Error("mel.bands must be >= 1");
  if (!(features.f_min >= 0.0 && features.f_min < features.f_max && features.f_max <= sample_rate / 2.0)) {
    throw Error("mel band edges must satisfy 0 <= mel.fmin < mel.fmax <= sample_rate / 2");
  }
  features.wpe.validate();
  train_chunks().validate();
  eval_chunks().validate();
  decode.validate();
  ensemble.validate();
  metrics.validate();
}

void set_config_value(PipelineConfig& c, const std::string& key, const std::string& value) {
  const std::string what = "config key " + key;
  const auto as_int = [&] { return detail::parse_int(detail::trim(value), what); };
  const auto as_double = [&] { return detail::parse_double(detail::trim(value), what); };
  if (key == "sample_rate") {
    c.sample_rate = as_int();
    c.features.stft.sample_rate = c.sample_rate;
  } else if (key == "stft.win") {
    c.features.stft.win_len = as_int();
  } else if (key == "stft.hop") {
    c.features.stft.hop = as_int();
  } else if (key == "mel.bands") {
    c.features.mel_bands = as_int();
  } else if (key == "mel.fmin") {
    c.features.f_min = as_double();
  } else if (key == "mel.fmax") {
    c.features.f_max = as_double();
  } else if (key == "wpe.taps") {
    c.features.wpe.taps = as_int();
  } else if (key == "wpe.delay") {
    c.features.wpe.delay = as_int();
  } else if (key == "wpe.iterations") {
    c.features.wpe.iterations = as_int();
  } else if (key == "wpe.epsilon") {
    c.features.wpe.epsilon = as_double();
  } else if (key == "wpe.regularization") {
    c.features.wpe.regularization = as_double();
  } else if (key == "chunk.len") {
    c.chunk_len = as_double();
  } else if (key == "chunk.hop_train") {
    c.chunk_hop_train = as_double();
  } else if (key == "chunk.hop_eval") {
    c.chunk_hop_eval = as_double();
  } else if (key == "decode.threshold") {
    c.decode.activity_threshold = as_double();
  } else if (key == "decode.merge_angle") {
    c.decode.merge_angle = as_double();
  } else if (key == "ensemble.angle") {
    c.ensemble.angle_threshold = as_double();
  } else if (key == "ensemble.min_votes") {
    c.ensemble.min_votes = as_int();
  } else if (key == "ensemble.exceptions") {
    c.ensemble.exception_classes = parse_class_set(value);
  } else if (key == "ensemble.exception_min_votes") {
    c.ensemble.exception_min_votes = as_int();
  } else if (key == "metrics.angle") {
    c.metrics.angle_threshold = as_double();
  } else if (key == "metrics.rel_dist") {
    c.metrics.rel_dist_threshold = as_double();
  } else if (key == "distance_unit") {
    c.distance_unit = parse_distance_unit(std::string(detail::trim(value)));
  } else {
    throw Error("unknown config key '" + key + "'");
  }
}

std::string get_config_value(const PipelineConfig& c, const std::string& key) {
  using detail::format_double;
  if (key == "sample_rate") return std::to_string(c.sample_rate);
  if (key == "stft.win") return std::to_string(c.features.stft.win_len);
  if (key == "stft.hop") return std::to_string(c.features.stft.hop);
  if (key == "mel.bands") return std::to_string(c.features.mel_bands);
  if (key == "mel.fmin") return format_double(c.features.f_min);
  if (key == "mel.fmax") return format_double(c.features.f_max);
  if (key == "wpe.taps") return std::to_string(c.features.wpe.taps);
  if (key == "wpe.delay") return std::to_string(c.features.wpe.delay);
  if (key == "wpe.iterations") return std::to_string(c.features.wpe.iterations);
  if (key == "wpe.epsilon") return format_double(c.features.wpe.epsilon);
  if (key == "wpe.regularization") return format_double(c.features.wpe.regularization);
  if (key == "chunk.len") return format_double(c.chunk_len);
  if (key == "chunk.hop_train") return format_double(c.chunk_hop_train);
  if (key == "chunk.hop_eval") return format_double(c.chunk_hop_eval);
  if (key == "decode.threshold") return format_double(c.decode.activity_threshold);
  if (key == "decode.merge_angle") return format_double(c.decode.merge_angle);
  if (key == "ensemble.angle") return format_double(c.ensemble.angle_threshold);
  if (key == "ensemble.min_votes") return std::to_string(c.ensemble.min_votes);
  if (key == "ensemble.exceptions") {
    std::string out;
    for (int id : c.ensemble.exception_classes) out += (out.empty() ? "" : ",") + std::to_string(id);
    return out;
  }
  if (key == "ensemble.exception_min_votes") return std::to_string(c.ensemble.exception_min_votes);
  if (key == "metrics.angle") return format_double(c.metrics.angle_threshold);
  if (key == "metrics.rel_dist") return format_double(c.metrics.rel_dist_threshold);
  if (key == "distance_unit") return to_string(c.distance_unit);
  throw Error("unknown config key '" + key + "'");
}

PipelineConfig parse_config(std::istream& in, const std::string& source_name) {
  PipelineConfig config;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    const auto hash = line.find('#');
    const auto content = detail::trim(std::string_view(line).substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) throw Error(where + "expected key = value");
    const std::string key(detail::trim(content.substr(0, eq)));
    const std::string value(detail::trim(content.substr(eq + 1)));
    if (!seen.insert(key).second) throw Error(where + "duplicate key '" + key + "'");
    try {
      set_config_value(config, key, value);
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
  }
  try {
    config.validate();
  } catch (const Error& e) {
    throw Error(source_name + ": " + e.what());
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_config(in, path.string());
}

std::string env_name(const std::string& key) {
  std::string name = "SELD_";
  for (char ch : key) name.push_back(ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  return name;
}

void apply_env_overrides(PipelineConfig& config, const EnvLookup& lookup) {
  for (const std::string& key : kKeys) {
    const std::string name = env_name(key);
    const char* value = lookup(name.c_str());
    if (value == nullptr) continue;
    try {
      set_config_value(config, key, value);
    } catch (const Error& e) {
      throw Error("environment " + name + ": " + e.what());
    }
  }
  config.validate();
}

void apply_env_overrides(PipelineConfig& config) {
  apply_env_overrides(config, [](const char* name) { return std::getenv(name); });
}

std::string dump_config(const PipelineConfig& config) {
  std::string out;
  for (const std::string& key : kKeys) out += key + " = " + get_config_value(config, key) + "\n";
  return out;
}

}  // namespace seld
