#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "seld/accddoa.hpp"
#include "seld/ensemble.hpp"
#include "seld/features.hpp"
#include "seld/foa_io.hpp"
#include "seld/metrics.hpp"

namespace seld {

struct PipelineConfig {
  int sample_rate = kPipelineSampleRate;
  FeatureConfig features;
  double chunk_len = 3.0;
  double chunk_hop_train = 1.0;
  double chunk_hop_eval = 3.0;
  DecodeConfig decode;
  EnsembleConfig ensemble;
  MatchingConfig metrics;
  DistanceUnit distance_unit = DistanceUnit::cm;

  ChunkSpec train_chunks() const { return {chunk_len, chunk_hop_train, kLabelFps}; }
  ChunkSpec eval_chunks() const { return {chunk_len, chunk_hop_eval, kLabelFps}; }

  void validate() const;
};

// Every recognised key, in file order.
const std::vector<std::string>& config_keys();

// Sets one key from its text value; unknown keys and malformed values throw.
void set_config_value(PipelineConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const PipelineConfig& config, const std::string& key);

// `key = value` lines; '#' starts a comment. Keys may appear once.
PipelineConfig parse_config(std::istream& in, const std::string& source_name = "<config>");
PipelineConfig load_config(const std::filesystem::path& path);

// Environment name of a key: SELD_ + upper case with '.' replaced by '_',
// e.g. wpe.taps -> SELD_WPE_TAPS.
std::string env_name(const std::string& key);

using EnvLookup = std::function<const char*(const char*)>;
// Overrides keys from the environment, then validates.
void apply_env_overrides(PipelineConfig& config, const EnvLookup& lookup);
void apply_env_overrides(PipelineConfig& config);

// All keys as `key = value` lines.
std::string dump_config(const PipelineConfig& config);

}  // namespace seld
