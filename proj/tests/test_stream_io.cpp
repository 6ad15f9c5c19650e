#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "test_util.hpp"
#include "vigil/config.hpp"
#include "vigil/errors.hpp"
#include "vigil/stream_io.hpp"

using namespace vigil;

namespace {

std::string keypoints_json(int count) {
  std::string s = "[";
  for (int i = 0; i < count; ++i) {
    if (i) s += ",";
    s += "[" + std::to_string(10 + i) + "," + std::to_string(20 + 2 * i) + ",0.9]";
  }
  return s + "]";
}

std::string frame_line(int keypoints) {
  return R"({"stream_id":"cam1","frame_index":4,"timestamp_ms":133,"detections":[{"bbox":[1,2,30,40],"score":0.8,"keypoints":)" +
         keypoints_json(keypoints) + "}]}";
}

}  // namespace

TEST_CASE("parse_frame accepts a minimal record") {
  const Frame f = parse_frame(frame_line(17));
  CHECK(f.stream_id == "cam1");
  CHECK(f.frame_index == 4);
  CHECK(f.timestamp_ms == 133);
  REQUIRE(f.detections.size() == 1);
  CHECK(f.detections[0].bbox == BBox{1, 2, 30, 40});
  CHECK(f.detections[0].score == 0.8);
  CHECK(f.detections[0].pose[16].x == 26);
  CHECK(f.detections[0].pose[16].y == 52);
}

TEST_CASE("parse_frame rejects 16 keypoints with a schema error") {
  try {
    parse_frame(frame_line(16));
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("expected 17 keypoints") != std::string::npos);
  }
}

TEST_CASE("parse_frame accepts an empty detection list") {
  const Frame f = parse_frame(R"({"stream_id":"s","frame_index":0,"timestamp_ms":0,"detections":[]})");
  CHECK(f.detections.empty());
}

TEST_CASE("parse_frame reports the byte offset of malformed syntax") {
  const std::string bad = R"({"stream_id":"s","frame_index":0,,})";
  try {
    parse_frame(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 33);
    CHECK(std::string(e.what()).find("byte 33") != std::string::npos);
  }
}

TEST_CASE("parse_frame validates values") {
  SUBCASE("non-finite coordinate") {
    std::string line = frame_line(17);
    line.replace(line.find("[10,20,0.9]"), 11, "[1e999,20,0.9]");
    CHECK_THROWS_AS(parse_frame(line), ValidationError);
  }
  SUBCASE("confidence above one") {
    std::string line = frame_line(17);
    line.replace(line.find("[10,20,0.9]"), 11, "[10,20,1.5]");
    CHECK_THROWS_AS(parse_frame(line), ValidationError);
  }
  SUBCASE("zero-width box") {
    std::string line = frame_line(17);
    line.replace(line.find("[1,2,30,40]"), 11, "[1,2,0,40]");
    CHECK_THROWS_AS(parse_frame(line), ValidationError);
  }
  SUBCASE("missing key") {
    CHECK_THROWS_AS(parse_frame(R"({"stream_id":"s","frame_index":0,"detections":[]})"),
                    SchemaError);
  }
}

TEST_CASE("serialize_frame round-trips random frames") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-500.0, 2500.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Frame f;
    f.stream_id = "s" + std::to_string(trial);
    f.frame_index = trial * 3;
    f.timestamp_ms = trial * 100;
    const int n = static_cast<int>(rng() % 4);
    for (int d = 0; d < n; ++d) {
      Detection det;
      det.bbox = {coord(rng), coord(rng), 1.0 + unit(rng) * 300, 1.0 + unit(rng) * 300};
      det.score = unit(rng);
      for (auto& kp : det.pose) kp = {coord(rng), coord(rng), unit(rng)};
      f.detections.push_back(det);
    }
    CHECK(parse_frame(serialize_frame(f)) == f);
  }
}

TEST_CASE("decimate keeps the floor-rule indices") {
  std::vector<int> kept;
  for (int i = 0; i <= 12; ++i)
    if (decimate(i, 30, 10)) kept.push_back(i);
  CHECK(kept == std::vector<int>{0, 3, 6, 9, 12});

  kept.clear();
  for (int i = 0; i <= 10; ++i)
    if (decimate(i, 25, 10)) kept.push_back(i);
  CHECK(kept == std::vector<int>{0, 3, 5, 8, 10});

  for (int i = 0; i < 50; ++i) CHECK(decimate(i, 10, 10));
}

TEST_CASE("decimate kept count over [0, N) by enumeration") {
  // Kept indices are the first index of each floor(i*p/q) value, so the count
  // is floor((N-1)*p/q) + 1. This equals ceil(N*p/q) whenever p divides q.
  for (int q = 1; q <= 120; ++q) {
    for (int p = 1; p <= q; ++p) {
      long kept = 0;
      for (int n = 1; n <= 1000; ++n) {
        kept += decimate(n - 1, q, p);
        const long expected = static_cast<long>(n - 1) * p / q + 1;
        if (kept != expected) {
          FAIL("p=" << p << " q=" << q << " n=" << n);
        }
        if (q % p == 0 && kept != (static_cast<long>(n) * p + q - 1) / q) {
          FAIL("ceil rule p=" << p << " q=" << q << " n=" << n);
        }
      }
    }
  }
}

TEST_CASE("parse_config applies defaults and overrides") {
  const EngineConfig def = parse_config("{}");
  CHECK(def.processing_fps == 10);
  CHECK(def.window_len == 10);
  CHECK(def.keypoint_conf_threshold == 0.3);
  CHECK(def.alert_prob_threshold == 0.5);
  CHECK(def.alert_consecutive_k == 3);
  CHECK(def.tracker.iou_gate == 0.3);
  CHECK(def.tracker.n_init == 3);
  CHECK(def.tracker.max_age == 30);

  const EngineConfig cfg = parse_config(
      R"({"input_fps":25,"window_len":20,"feature_mode":"angle","tracker":{"max_age":5},"sink":"file:/tmp/x"})");
  CHECK(cfg.input_fps == 25);
  CHECK(cfg.window_len == 20);
  CHECK(cfg.feature_mode == FeatureMode::kAngle);
  CHECK(cfg.feature_dim() == 12);
  CHECK(cfg.tracker.max_age == 5);
  CHECK(cfg.sink == "file:/tmp/x");

  CHECK_THROWS_AS(parse_config(R"({"window_len":15})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"input_fps":5})"), ValidationError);
  CHECK(parse_window_spec("2s", 10) == 20);
}
