#include <doctest.h>

#include <map>
#include <sstream>

#include "seld/config.hpp"
#include "seld/error.hpp"

using namespace seld;

TEST_CASE("shipped config matches the built-in defaults") {
  const PipelineConfig file = load_config(SELD_SOURCE_DIR "/config/default.conf");
  CHECK(dump_config(file) == dump_config(PipelineConfig{}));
  CHECK(file.features.wpe.taps == 60);
  CHECK(file.features.stft.hop == 150);
  CHECK(file.ensemble.exception_classes == std::set<int>{10, 11, 12});
}

TEST_CASE("every key round trips through dump and parse") {
  PipelineConfig c;
  c.features.wpe.taps = 12;
  c.metrics.rel_dist_threshold = 0.25;
  c.distance_unit = DistanceUnit::m;
  c.ensemble.exception_classes = {3};
  std::istringstream in(dump_config(c));
  const PipelineConfig back = parse_config(in);
  CHECK(dump_config(back) == dump_config(c));
  for (const auto& key : config_keys()) CHECK_FALSE(get_config_value(back, key).empty());
}

TEST_CASE("malformed files are rejected with their line") {
  std::istringstream unknown("stft.hop = 150\nbogus = 1\n");
  CHECK_THROWS_WITH_AS(parse_config(unknown, "x.conf"), doctest::Contains("x.conf:2"), Error);
  std::istringstream dup("wpe.taps = 10\nwpe.taps = 20\n");
  CHECK_THROWS_WITH_AS(parse_config(dup), doctest::Contains("duplicate"), Error);
  std::istringstream no_eq("wpe.taps 10\n");
  CHECK_THROWS_AS(parse_config(no_eq), Error);
  std::istringstream bad_value("wpe.taps = ten\n");
  CHECK_THROWS_AS(parse_config(bad_value), Error);
  std::istringstream bad_rate("sample_rate = 48000\n");
  CHECK_THROWS_AS(parse_config(bad_rate), Error);
  std::istringstream comments("# only a comment\n\n  mel.bands = 64  # trailing\n");
  CHECK(parse_config(comments).features.mel_bands == 64);
}

TEST_CASE("environment overrides") {
  CHECK(env_name("wpe.taps") == "SELD_WPE_TAPS");
  CHECK(env_name("distance_unit") == "SELD_DISTANCE_UNIT");
  std::map<std::string, std::string> env = {{"SELD_WPE_TAPS", "30"}, {"SELD_DISTANCE_UNIT", "m"}};
  const EnvLookup lookup = [&](const char* name) -> const char* {
    const auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  };
  PipelineConfig c;
  apply_env_overrides(c, lookup);
  CHECK(c.features.wpe.taps == 30);
  CHECK(c.distance_unit == DistanceUnit::m);
  env["SELD_ENSEMBLE_MIN_VOTES"] = "7";
  PipelineConfig bad;
  CHECK_THROWS_WITH_AS(apply_env_overrides(bad, lookup), doctest::Contains("ensemble.min_votes"), Error);
}
