#include <doctest.h>

#include <map>
#include <random>

#include "test_util.hpp"
#include "vigil/geometry.hpp"
#include "vigil/scenario.hpp"
#include "vigil/tracker.hpp"

using namespace vigil;
using vigil::testing::detection_at;

TEST_CASE("cold start creates tentative tracks 1 and 2") {
  Tracker tracker;
  const TrackerStep step = tracker.step({detection_at({0, 0, 50, 100}), detection_at({300, 0, 50, 100})});
  CHECK(step.matches.empty());
  CHECK(step.created == std::vector<std::pair<std::int64_t, int>>{{1, 0}, {2, 1}});
  REQUIRE(tracker.tracks().size() == 2);
  for (const Track& t : tracker.tracks()) {
    CHECK(t.status == TrackStatus::kTentative);
    CHECK(t.hits == 1);
    CHECK(t.misses == 0);
  }
}

TEST_CASE("a detection at the predicted box is matched") {
  Tracker tracker;
  tracker.step({detection_at({10, 10, 40, 80})});
  const BBox predicted = tracker.tracks()[0].bbox();  // zero velocity: unchanged
  const TrackerStep step = tracker.step({detection_at(predicted)});
  CHECK(step.matches == std::vector<std::pair<std::int64_t, int>>{{1, 0}});
  CHECK(step.created.empty());
  CHECK(tracker.find(1)->hits == 2);
  CHECK(tracker.find(1)->status == TrackStatus::kTentative);
  tracker.step({detection_at(predicted)});
  CHECK(tracker.find(1)->hits == 3);
  CHECK(tracker.find(1)->is_confirmed());
}

TEST_CASE("lifecycle: tentative dies on a miss, confirmed survives max_age misses") {
  TrackerParams params;
  params.max_age = 4;
  Tracker tracker(params);
  const Detection d = detection_at({0, 0, 40, 80});
  tracker.step({d});
  tracker.step({});
  CHECK(tracker.tracks().empty());

  tracker.step({d});
  tracker.step({d});
  tracker.step({d});
  REQUIRE(tracker.find(2));
  CHECK(tracker.find(2)->is_confirmed());
  for (int miss = 1; miss <= 4; ++miss) {
    tracker.step({});
    REQUIRE(tracker.find(2));
    CHECK(tracker.find(2)->misses == miss);
    CHECK(tracker.find(2)->hits >= params.n_init);
  }
  const TrackerStep last = tracker.step({});
  CHECK(last.deleted == std::vector<std::int64_t>{2});
  CHECK(tracker.tracks().empty());
  // Ids are never reused.
  tracker.step({d});
  CHECK(tracker.tracks()[0].id == 3);
}

TEST_CASE("gated pairs are never matched") {
  Tracker tracker;
  tracker.step({detection_at({0, 0, 40, 80})});
  const TrackerStep step = tracker.step({detection_at({200, 0, 40, 80})});
  CHECK(step.matches.empty());
  CHECK(step.created == std::vector<std::pair<std::int64_t, int>>{{2, 0}});
  CHECK(step.deleted == std::vector<std::int64_t>{1});
}

TEST_CASE("appearance hook shifts the association") {
  // Two equally overlapping detections; the hook prefers the second.
  AppearanceCost prefer_second = [](const Track&, const Detection& d) {
    return d.score > 0.95 ? 0.0 : 0.5;
  };
  Tracker tracker({}, prefer_second);
  tracker.step({detection_at({100, 0, 40, 80})});
  Detection left = detection_at({95, 0, 40, 80});
  Detection right = detection_at({105, 0, 40, 80});
  right.score = 0.99;
  const TrackerStep step = tracker.step({left, right});
  CHECK(step.matches == std::vector<std::pair<std::int64_t, int>>{{1, 1}});
}

TEST_CASE("empty detection list only increments misses") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(0, 1000);
  for (int trial = 0; trial < 50; ++trial) {
    Tracker tracker;
    const int frames = 1 + static_cast<int>(rng() % 8);
    for (int f = 0; f < frames; ++f) {
      std::vector<Detection> dets;
      const int n = static_cast<int>(rng() % 5);
      for (int i = 0; i < n; ++i) dets.push_back(detection_at({pos(rng), pos(rng), 40, 90}));
      tracker.step(dets);
    }
    std::map<std::int64_t, int> before;
    for (const Track& t : tracker.tracks())
      if (t.is_confirmed()) before[t.id] = t.misses;
    const std::int64_t next = tracker.next_id();
    const TrackerStep step = tracker.step({});
    CHECK(step.created.empty());
    CHECK(tracker.next_id() == next);
    for (const Track& t : tracker.tracks()) {
      REQUIRE(before.count(t.id));
      CHECK(t.misses == before[t.id] + 1);
    }
  }
}

TEST_CASE("track ids increase with creation and are never reused") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(0, 2000);
  Tracker tracker;
  std::int64_t last_created = 0;
  for (int f = 0; f < 300; ++f) {
    std::vector<Detection> dets;
    const int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) dets.push_back(detection_at({pos(rng), pos(rng), 40, 90}));
    const TrackerStep step = tracker.step(dets);
    for (const auto& [id, det] : step.created) {
      CHECK(id > last_created);
      last_created = id;
    }
  }
}

namespace {

/// Per-frame oracle: extrapolate each identity's box centre from its two
/// previous ground-truth positions and give every detection the identity
/// with the nearest prediction.
std::vector<int> nearest_prediction(const std::vector<std::vector<BBox>>& history,
                                    const std::vector<Detection>& dets) {
  std::vector<int> owner;
  for (const Detection& d : dets) {
    const double cx = d.bbox.center_x(), cy = d.bbox.center_y();
    int best = -1;
    double best_dist = 0;
    for (std::size_t id = 0; id < history.size(); ++id) {
      const auto& h = history[id];
      const BBox& b1 = h[h.size() - 1];
      const BBox& b0 = h.size() > 1 ? h[h.size() - 2] : b1;
      const double px = 2 * b1.center_x() - b0.center_x();
      const double py = 2 * b1.center_y() - b0.center_y();
      const double dist = std::hypot(px - cx, py - cy);
      if (best < 0 || dist < best_dist) {
        best = static_cast<int>(id);
        best_dist = dist;
      }
    }
    owner.push_back(best);
  }
  return owner;
}

}  // namespace

TEST_CASE("crossing targets keep their identities") {
  ScenarioSpec spec;
  spec.fps = 10;
  spec.duration_s = 2.0;
  PersonSpec a;
  a.start_x = 150;
  a.start_y = 300;
  a.velocity_x = 100;
  a.pose = PoseTemplate::kWalking;
  PersonSpec b = a;
  b.start_x = 350;
  b.start_y = 315;
  b.velocity_x = -100;
  b.pose = PoseTemplate::kArmSwing;
  spec.persons = {a, b};
  const auto frames = gen_scenario(spec);
  REQUIRE(frames.size() == 20);

  Tracker tracker;
  std::vector<std::vector<BBox>> history(2);
  bool crossed = false;
  for (const Frame& f : frames) {
    REQUIRE(f.detections.size() == 2);
    if (f.frame_index > 0) {
      CHECK(nearest_prediction(history, f.detections) == std::vector<int>{0, 1});
      for (int p = 0; p < 2; ++p) {
        const Track* t = tracker.find(p + 1);
        REQUIRE(t);
        CHECK(iou(from_xyah(tracker.find(p + 1)->state.mean.head<4>() +
                            tracker.find(p + 1)->state.mean.tail<4>()),
                  f.detections[p].bbox) >= 0.3);
      }
    }
    const TrackerStep step = tracker.step(f.detections);
    if (f.frame_index == 0) {
      CHECK(step.created == std::vector<std::pair<std::int64_t, int>>{{1, 0}, {2, 1}});
    } else {
      CHECK(step.created.empty());
      CHECK(step.matches == std::vector<std::pair<std::int64_t, int>>{{1, 0}, {2, 1}});
    }
    for (int p = 0; p < 2; ++p) history[p].push_back(f.detections[p].bbox);
    crossed = crossed || f.detections[0].bbox.center_x() > f.detections[1].bbox.center_x();
  }
  CHECK(crossed);
  CHECK(tracker.next_id() == 3);
}
