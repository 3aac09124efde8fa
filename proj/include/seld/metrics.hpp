#pragma once

#include <array>
#include <string>
#include <vector>

#include "seld/foa_io.hpp"

namespace seld {

struct MatchingConfig {
  double angle_threshold = 20.0;     // degrees
  double rel_dist_threshold = 1.0;   // |d_pred - d_ref| / d_ref

  void validate() const;
};

struct MatchedPair {
  int pred = 0;  // index into the prediction list
  int ref = 0;   // index into the reference list
  double angle = 0.0;
};

struct FrameMatch {
  std::vector<MatchedPair> pairs;
  std::vector<int> unmatched_preds;
  std::vector<int> unmatched_refs;
};

// Minimum total angular error one-to-one assignment between the class_id
// events of one frame. Indices refer to the full input lists.
FrameMatch match_frame(const EventList& preds, const EventList& refs, int class_id);

// Values reported when a quantity has no defined value.
inline constexpr double kUndefinedDoae = 180.0;
inline constexpr double kUndefinedRde = 1.0;

struct ClassStats {
  int class_id = 0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long refs = 0;
  long pairs = 0;
  double angle_sum = 0.0;
  double rel_dist_sum = 0.0;

  double f1() const;
  bool has_refs() const { return refs > 0; }
  bool has_pairs() const { return pairs > 0; }
  double doae() const { return has_pairs() ? angle_sum / pairs : kUndefinedDoae; }
  double rde() const { return has_pairs() ? rel_dist_sum / pairs : kUndefinedRde; }
};

struct EvalReport {
  double f1 = 0.0;    // macro over classes with references
  double doae = 0.0;  // macro over classes with matched pairs, degrees
  double rde = 0.0;   // macro over classes with matched pairs
  std::array<ClassStats, kNumClasses> per_class;

  long total_tp() const;
  long total_fp() const;
  long total_fn() const;
};

// Frame-level evaluation. A matched pair is a true positive when its angular
// error is within angle_threshold and its relative distance error within
// rel_dist_threshold; otherwise it counts once as FP and once as FN. DOAE
// and RDE average over all matched pairs regardless of the thresholds.
EvalReport evaluate(const std::vector<EventList>& preds, const std::vector<EventList>& refs,
                    const MatchingConfig& config = {});

// Human-readable table and key=value report.
std::string format_table(const EvalReport& report);
std::string format_key_values(const EvalReport& report);

}  // namespace seld
