#include "seld/ensemble.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <tuple>

#include "seld/error.hpp"

namespace seld {

namespace {

// Angles this close count as equal when ranking candidates, so ties are
// broken by index rather than by rounding noise.
constexpr double kAngleTolerance = 1e-9;

struct Candidate {
  DetectionRef ref;
  Vec3 unit;
};

bool before(const DetectionRef& a, const DetectionRef& b) {
  return std::tie(a.source, a.index) < std::tie(b.source, b.index);
}

}  // namespace

void EnsembleConfig::validate() const {
  if (!(angle_threshold > 0.0)) throw Error("ensemble.angle must be > 0");
  if (min_votes < 1 || min_votes > 3) throw Error("ensemble.min_votes must be in 1..3");
  if (exception_min_votes < 1 || exception_min_votes > min_votes) {
    throw Error("ensemble.exception_min_votes must be in 1..min_votes");
  }
  for (int c : exception_classes) {
    if (c < 0 || c >= kNumClasses) throw Error("ensemble exception class out of range: " + std::to_string(c));
  }
}

std::vector<Cluster> cluster_detections(const std::vector<EventList>& sources, int class_id,
                                        double angle_threshold) {
  std::vector<Candidate> pool;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (std::size_t i = 0; i < sources[s].size(); ++i) {
      const Event& e = sources[s][i];
      if (e.class_id != class_id) continue;
      pool.push_back({{static_cast<int>(s), static_cast<int>(i)}, to_unit_vector({e.azimuth, e.elevation})});
    }
  }
  const double limit = angle_threshold + kAngleTolerance;
  std::vector<bool> used(pool.size(), false);
  std::vector<Cluster> clusters;

  while (true) {
    // Seed: closest unused cross-source pair.
    double best = std::numeric_limits<double>::infinity();
    std::size_t sa = 0, sb = 0;
    bool found = false;
    for (std::size_t a = 0; a < pool.size(); ++a) {
      if (used[a]) continue;
      for (std::size_t b = a + 1; b < pool.size(); ++b) {
        if (used[b] || pool[a].ref.source == pool[b].ref.source) continue;
        const double angle = angular_distance(pool[a].unit, pool[b].unit);
        if (angle > limit) continue;
        // pool is ordered by (source, index), so the first pair found at a
        // given distance is the lexicographically smallest.
        if (!found || angle < best - kAngleTolerance) {
          best = angle;
          sa = a;
          sb = b;
          found = true;
        }
      }
    }
    if (!found) break;

    Cluster cluster;
    std::vector<bool> has_source(sources.size(), false);
    Vec3 sum{};
    auto attach = [&](std::size_t k) {
      used[k] = true;
      cluster.members.push_back(pool[k].ref);
      has_source[static_cast<std::size_t>(pool[k].ref.source)] = true;
      sum = sum + pool[k].unit;
      cluster.centroid = normalized(sum);
    };
    attach(sa);
    attach(sb);
    while (true) {
      double nearest = std::numeric_limits<double>::infinity();
      std::size_t pick = pool.size();
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (used[k] || has_source[static_cast<std::size_t>(pool[k].ref.source)]) continue;
        const double angle = angular_distance(cluster.centroid, pool[k].unit);
        if (angle > limit) continue;
        if (pick == pool.size() || angle < nearest - kAngleTolerance) {
          nearest = angle;
          pick = k;
        }
      }
      if (pick == pool.size()) break;
      attach(pick);
    }
    std::sort(cluster.members.begin(), cluster.members.end(), before);
    clusters.push_back(std::move(cluster));
  }

  for (std::size_t k = 0; k < pool.size(); ++k) {
    if (used[k]) continue;
    clusters.push_back({{pool[k].ref}, pool[k].unit});
  }
  return clusters;
}

Event fuse_cluster(const std::vector<EventList>& sources, const Cluster& cluster, int frame, int class_id) {
  Vec3 sum{};
  double distance = 0.0;
  for (const DetectionRef& m : cluster.members) {
    const Event& e = sources[static_cast<std::size_t>(m.source)][static_cast<std::size_t>(m.index)];
    sum = sum + to_unit_vector({e.azimuth, e.elevation});
    distance += e.distance;
  }
  const double n = static_cast<double>(cluster.members.size());
  const Direction d = to_direction((1.0 / n) * sum);
  return {frame, class_id, 0, d.azimuth, d.elevation, distance / n};
}

EventList fuse_frame(const std::vector<EventList>& sources, int frame, double angle_threshold,
                     const VoteBounds& required_votes) {
  std::array<bool, kNumClasses> present{};
  for (const EventList& src : sources) {
    for (const Event& e : src) {
      if (e.class_id < 0 || e.class_id >= kNumClasses) {
        throw Error("frame " + std::to_string(frame) + ": class_id out of range: " + std::to_string(e.class_id));
      }
      present[static_cast<std::size_t>(e.class_id)] = true;
    }
  }
  EventList out;
  for (int c = 0; c < kNumClasses; ++c) {
    if (!present[static_cast<std::size_t>(c)]) continue;
    for (const Cluster& cluster : cluster_detections(sources, c, angle_threshold)) {
      if (cluster.votes() >= required_votes[static_cast<std::size_t>(c)]) {
        out.push_back(fuse_cluster(sources, cluster, frame, c));
      }
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].source_id = static_cast<int>(i);
  return out;
}

std::vector<EventList> fuse_temporal(const std::vector<WindowPrediction>& windows, int total_frames,
                                     const EnsembleConfig& config) {
  config.validate();
  if (total_frames < 0) throw Error("negative frame count");
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cover(static_cast<std::size_t>(total_frames));
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const WindowPrediction& win = windows[w];
    const long end = static_cast<long>(win.start_frame) + static_cast<long>(win.frames.size());
    if (win.start_frame < 0 || end > total_frames) {
      throw Error("window " + std::to_string(w) + " [" + std::to_string(win.start_frame) + ", " +
                  std::to_string(end) + ") is misaligned with " + std::to_string(total_frames) + " frames");
    }
    for (std::size_t t = 0; t < win.frames.size(); ++t) {
      cover[static_cast<std::size_t>(win.start_frame) + t].push_back({w, t});
    }
  }
  for (int f = 0; f < total_frames; ++f) {
    if (cover[static_cast<std::size_t>(f)].empty()) {
      throw Error("frame " + std::to_string(f) + " is not covered by any window");
    }
  }

  std::vector<EventList> out(static_cast<std::size_t>(total_frames));
#pragma omp parallel for schedule(dynamic, 16)
  for (int f = 0; f < total_frames; ++f) {
    const auto& members = cover[static_cast<std::size_t>(f)];
    std::vector<EventList> sources;
    sources.reserve(members.size());
    for (const auto& [w, t] : members) sources.push_back(windows[w].frames[t]);
    const int n = static_cast<int>(sources.size());
    VoteBounds bounds;
    bounds.fill(std::min(config.min_votes, n / 2 + 1));
    out[static_cast<std::size_t>(f)] = fuse_frame(sources, f, config.angle_threshold, bounds);
  }
  return out;
}

std::vector<EventList> fuse_models(const std::vector<std::vector<EventList>>& models, const EnsembleConfig& config) {
  config.validate();
  if (models.empty()) return {};
  const std::size_t frames = models[0].size();
  for (std::size_t m = 1; m < models.size(); ++m) {
    if (models[m].size() != frames) {
      throw Error("model " + std::to_string(m) + " has " + std::to_string(models[m].size()) +
                  " frames, model 0 has " + std::to_string(frames));
    }
  }
  VoteBounds bounds;
  bounds.fill(config.min_votes);
  for (int c : config.exception_classes) bounds[static_cast<std::size_t>(c)] = config.exception_min_votes;

  std::vector<EventList> out(frames);
#pragma omp parallel for schedule(dynamic, 16)
  for (long f = 0; f < static_cast<long>(frames); ++f) {
    std::vector<EventList> sources;
    sources.reserve(models.size());
    for (const auto& model : models) sources.push_back(model[static_cast<std::size_t>(f)]);
    out[static_cast<std::size_t>(f)] = fuse_frame(sources, static_cast<int>(f), config.angle_threshold, bounds);
  }
  return out;
}

}  // namespace seld
