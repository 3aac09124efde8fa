#include <doctest.h>

#include <optional>
#include <random>

#include "seld/angles.hpp"
#include "seld/ensemble.hpp"
#include "seld/error.hpp"

using namespace seld;

namespace {

Event det(int class_id, double az, double el = 0.0, double dist = 1.0) { return {0, class_id, 0, az, el, dist}; }

}  // namespace

TEST_CASE("clusters by the greedy centroid rule") {
  const std::vector<EventList> three = {{det(1, 0)}, {det(1, 10)}, {det(1, 12)}};
  auto clusters = cluster_detections(three, 1, 15.0);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].votes() == 3);

  const std::vector<EventList> apart = {{det(1, 0)}, {det(1, 40)}};
  clusters = cluster_detections(apart, 1, 15.0);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].votes() == 1);
  CHECK(clusters[1].votes() == 1);

  // 0/10 pair seeds (10 degrees); its centroid is at 5 degrees, exactly 15
  // from the third detection, which therefore joins.
  const std::vector<EventList> chain = {{det(1, 0)}, {det(1, 10)}, {det(1, 20)}};
  clusters = cluster_detections(chain, 1, 15.0);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].votes() == 3);
  CHECK(to_direction(clusters[0].centroid).azimuth == doctest::Approx(10.0));

  const std::vector<EventList> chain_far = {{det(1, 0)}, {det(1, 10)}, {det(1, 21)}};
  CHECK(cluster_detections(chain_far, 1, 15.0).size() == 2);
}

TEST_CASE("a cluster holds at most one detection per source") {
  const std::vector<EventList> sources = {{det(2, 0), det(2, 3)}, {det(2, 1)}};
  const auto clusters = cluster_detections(sources, 2, 15.0);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].members == std::vector<DetectionRef>{{0, 0}, {1, 0}});
  CHECK(clusters[1].members == std::vector<DetectionRef>{{0, 1}});
}

TEST_CASE("other classes are ignored and ties prefer lower indices") {
  const std::vector<EventList> sources = {{det(3, 0), det(4, 0)}, {det(3, 10)}, {det(3, -10)}};
  const auto clusters = cluster_detections(sources, 3, 15.0);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].members.front() == DetectionRef{0, 0});
  CHECK(clusters[0].votes() == 3);
  const std::vector<EventList> tie = {{det(3, 0)}, {det(3, 10)}, {det(3, -10)}};
  const auto tied = cluster_detections(tie, 3, 5.0);
  CHECK(tied.size() == 3);
}

TEST_CASE("temporal fusion: 2 of 3 passes, 1 of 3 drops") {
  EnsembleConfig cfg;
  // Three 3-frame windows at hop 1 all covering absolute frame 2.
  auto windows_with = [](std::vector<std::optional<Event>> at_frame2) {
    std::vector<WindowPrediction> w;
    for (int k = 0; k < 3; ++k) {
      WindowPrediction win{k, std::vector<EventList>(3)};
      if (at_frame2[static_cast<std::size_t>(k)]) win.frames[static_cast<std::size_t>(2 - k)].push_back(*at_frame2[static_cast<std::size_t>(k)]);
      w.push_back(win);
    }
    return w;
  };
  const Event a = det(6, 20.0, 0.0, 2.0), b = det(6, 28.0, 0.0, 3.0);
  auto out = fuse_temporal(windows_with({a, a, a}), 5, cfg);
  REQUIRE(out[2].size() == 1);
  CHECK(out[2][0].azimuth == doctest::Approx(20.0));
  CHECK(out[2][0].distance == doctest::Approx(2.0));
  CHECK(out[2][0].frame == 2);

  out = fuse_temporal(windows_with({a, b, std::nullopt}), 5, cfg);
  REQUIRE(out[2].size() == 1);
  CHECK(out[2][0].azimuth == doctest::Approx(24.0));
  CHECK(out[2][0].elevation == doctest::Approx(0.0).scale(1.0));
  CHECK(out[2][0].distance == doctest::Approx(2.5));

  out = fuse_temporal(windows_with({std::nullopt, a, std::nullopt}), 5, cfg);
  CHECK(out[2].empty());
}

TEST_CASE("temporal fusion uses a majority of the windows present") {
  EnsembleConfig cfg;
  // Frame 0 is covered by one window only, frame 1 by two.
  std::vector<WindowPrediction> w = {{0, {{det(1, 0)}, {det(1, 0)}, {}}}, {1, {{}, {}, {}}}, {2, {{}, {}, {}}}};
  const auto out = fuse_temporal(w, 5, cfg);
  CHECK(out[0].size() == 1);
  CHECK(out[1].empty());
  CHECK_THROWS_AS(fuse_temporal(w, 4, cfg), Error);
  CHECK_THROWS_AS(fuse_temporal({{3, {{}, {}, {}}}}, 5, cfg), Error);
  CHECK_THROWS_AS(fuse_temporal({{-1, {{}, {}, {}}}}, 5, cfg), Error);
}

TEST_CASE("model fusion with exception classes") {
  EnsembleConfig cfg;
  auto models = [](EventList a, EventList b, EventList c) {
    return std::vector<std::vector<EventList>>{{a}, {b}, {c}};
  };
  const auto knock = fuse_models(models({det(12, 50)}, {}, {}), cfg);
  REQUIRE(knock[0].size() == 1);
  CHECK(knock[0][0].class_id == 12);
  CHECK(fuse_models(models({det(0, 50)}, {}, {}), cfg)[0].empty());
  const auto bell = fuse_models(models({det(11, 0)}, {det(11, 10)}, {}), cfg);
  REQUIRE(bell[0].size() == 1);
  CHECK(bell[0][0].azimuth == doctest::Approx(5.0));
  CHECK_THROWS_AS(fuse_models({{{}, {}}, {{}}}, cfg), Error);
}

TEST_CASE("config validation") {
  EnsembleConfig cfg;
  cfg.min_votes = 4;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.exception_min_votes = 3;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.exception_classes = {13};
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("fusing identical predictions is idempotent") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> az(-180.0, 180.0), el(-60.0, 60.0), dist(0.5, 5.0);
  std::uniform_int_distribution<int> cls(0, 12), n(0, 4);
  EnsembleConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    EventList frame;
    const int count = n(rng);
    for (int i = 0; i < count; ++i) {
      const Event e{0, cls(rng), 0, az(rng), el(rng), dist(rng)};
      bool separated = true;
      for (const Event& o : frame) {
        if (o.class_id == e.class_id && angular_distance(Direction{o.azimuth, o.elevation}, Direction{e.azimuth, e.elevation}) <= 2 * cfg.angle_threshold) separated = false;
      }
      if (separated) frame.push_back(e);
    }
    const auto fused = fuse_models({{frame}, {frame}, {frame}}, cfg);
    REQUIRE(fused[0].size() == frame.size());
    for (const Event& e : frame) {
      bool found = false;
      for (const Event& f : fused[0]) {
        if (f.class_id == e.class_id && f.distance == doctest::Approx(e.distance).epsilon(1e-12) &&
            angular_distance(Direction{f.azimuth, f.elevation}, Direction{e.azimuth, e.elevation}) < 1e-6) {
          found = true;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("exception detections survive regardless of geometry") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> az(-180.0, 180.0), el(-80.0, 80.0);
  EnsembleConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    const int c = 10 + trial % 3;
    std::vector<std::vector<EventList>> models(3, std::vector<EventList>(1));
    models[static_cast<std::size_t>(trial % 3)][0].push_back({0, c, 0, az(rng), el(rng), 1.0});
    for (int extra = 0; extra < 3; ++extra) {
      models[static_cast<std::size_t>(extra)][0].push_back({0, c, 1, az(rng), el(rng), 2.0});
    }
    const auto fused = fuse_models(models, cfg);
    int covered = 0;
    for (const auto& m : models) covered += static_cast<int>(m[0].size());
    int votes = 0;
    for (const Cluster& cl : cluster_detections({models[0][0], models[1][0], models[2][0]}, c, cfg.angle_threshold)) {
      votes += cl.votes();
    }
    CHECK(votes == covered);
    CHECK(fused[0].size() == cluster_detections({models[0][0], models[1][0], models[2][0]}, c, cfg.angle_threshold).size());
  }
}

TEST_CASE("adding a detection never deactivates a frame class for min_votes up to 2") {
  std::mt19937 rng(91);
  std::uniform_real_distribution<double> az(-40.0, 40.0), el(-20.0, 20.0);
  std::uniform_int_distribution<int> n(0, 3), src(0, 2);
  for (int min_votes : {1, 2}) {
    VoteBounds bounds;
    bounds.fill(min_votes);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<EventList> sources(3);
      for (auto& s : sources) {
        const int count = n(rng);
        for (int i = 0; i < count; ++i) s.push_back({0, 0, 0, az(rng), el(rng), 1.0});
      }
      const bool before = !fuse_frame(sources, 0, 15.0, bounds).empty();
      sources[static_cast<std::size_t>(src(rng))].push_back({0, 0, 0, az(rng), el(rng), 1.0});
      const bool after = !fuse_frame(sources, 0, 15.0, bounds).empty();
      CHECK((!before || after));
    }
  }
}

TEST_CASE("greedy stealing can lower the event count") {
  // {A, B} and {C, E} fuse separately; Z pairs with C and pulls B away from A.
  const std::vector<EventList> before = {{det(0, 0)}, {det(0, 13), det(0, 40)}, {det(0, 27)}};
  std::vector<EventList> after = before;
  after[0].push_back(det(0, 20));
  VoteBounds two;
  two.fill(2);
  const auto a = fuse_frame(before, 0, 15.0, two);
  const auto b = fuse_frame(after, 0, 15.0, two);
  CHECK(a.size() == 2);
  CHECK(b.size() == 1);
}
