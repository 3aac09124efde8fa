#pragma once

#include <array>
#include <set>
#include <vector>

#include "seld/angles.hpp"
#include "seld/foa_io.hpp"

namespace seld {

struct EnsembleConfig {
  double angle_threshold = 15.0;  // degrees
  int min_votes = 2;
  std::set<int> exception_classes = {10, 11, 12};  // Water tap, Bell, Knock
  int exception_min_votes = 1;

  void validate() const;
};

struct DetectionRef {
  int source = 0;
  int index = 0;  // position in that source's EventList
  friend bool operator==(const DetectionRef&, const DetectionRef&) = default;
};

struct Cluster {
  std::vector<DetectionRef> members;  // at most one per source
  Vec3 centroid;                      // normalised sum of member unit vectors
  int votes() const { return static_cast<int>(members.size()); }
};

// Greedy clustering of the class_id detections of one frame. Seeds with the
// closest cross-source pair within the threshold, then repeatedly attaches
// the nearest detection of a source not yet in the cluster. Detections left
// over become singletons. Ties resolve by (source, index).
std::vector<Cluster> cluster_detections(const std::vector<EventList>& sources, int class_id,
                                        double angle_threshold);

// Mean x, y, z and distance of the members, direction renormalised.
Event fuse_cluster(const std::vector<EventList>& sources, const Cluster& cluster, int frame, int class_id);

using VoteBounds = std::array<int, kNumClasses>;

// Fuses one frame; clusters of class c survive with required_votes[c] votes.
EventList fuse_frame(const std::vector<EventList>& sources, int frame, double angle_threshold,
                     const VoteBounds& required_votes);

// Window of chunk-local frame predictions starting at an absolute frame.
struct WindowPrediction {
  int start_frame = 0;
  std::vector<EventList> frames;
};

// Frame t is fused from every window covering it; with n windows the vote
// bound is min(min_votes, n / 2 + 1). Every frame in [0, total_frames) must
// be covered.
std::vector<EventList> fuse_temporal(const std::vector<WindowPrediction>& windows, int total_frames,
                                     const EnsembleConfig& config);

// All models must cover the same number of frames. Exception classes need
// exception_min_votes, the rest min_votes.
std::vector<EventList> fuse_models(const std::vector<std::vector<EventList>>& models, const EnsembleConfig& config);

}  // namespace seld
