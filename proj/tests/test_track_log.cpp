#include <doctest.h>

#include <set>
#include <sstream>

#include "test_util.hpp"
#include "vigil/errors.hpp"
#include "vigil/track_log.hpp"

using namespace vigil;

namespace {

TrackRecord record(std::int64_t frame, std::int64_t id) {
  TrackRecord r;
  r.frame_index = frame;
  r.track_id = id;
  r.payload = {{"tag", std::to_string(frame) + ":" + std::to_string(id)}};
  return r;
}

std::set<std::int64_t> ids_of(const std::vector<TrackRecord>& records) {
  std::set<std::int64_t> ids;
  for (const auto& r : records) ids.insert(r.track_id);
  return ids;
}

/// Ids 1, 2, 3, 6 and 7 over 20 frames. Id 3 covers frames 0..9 and id 7
/// frames 10..19, the same person re-acquired under a new id.
std::vector<TrackRecord> synthetic_log(bool overlap_at_12 = false) {
  std::vector<TrackRecord> log;
  for (std::int64_t f = 0; f < 20; ++f) {
    log.push_back(record(f, 1));
    if (f % 4 == 0) log.push_back(record(f, 2));
    if (f < 10 || (overlap_at_12 && f == 12)) log.push_back(record(f, 3));
    if (f >= 5 && f < 8) log.push_back(record(f, 6));
    if (f >= 10) log.push_back(record(f, 7));
  }
  return log;
}

}  // namespace

TEST_CASE("removing ids 2 and 6 leaves 1, 3 and 7 in order") {
  const auto log = synthetic_log();
  REQUIRE(ids_of(log) == std::set<std::int64_t>{1, 2, 3, 6, 7});
  const auto out = remove_tracks(log, {2, 6});
  CHECK(ids_of(out) == std::set<std::int64_t>{1, 3, 7});
  std::vector<TrackRecord> expected;
  for (const auto& r : log)
    if (r.track_id != 2 && r.track_id != 6) expected.push_back(r);
  CHECK(out == expected);
}

TEST_CASE("remove_tracks edge cases") {
  const auto log = synthetic_log();
  CHECK(remove_tracks(log, {}) == log);
  CHECK(remove_tracks(log, {1, 2, 3, 6, 7}).empty());
  CHECK(remove_tracks(log, {99}) == log);
}

TEST_CASE("merging 7 into 3 relabels every id-7 row") {
  const auto log = synthetic_log();
  const auto out = merge_tracks(log, 7, 3);
  REQUIRE(out.size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    CHECK(out[i].frame_index == log[i].frame_index);
    CHECK(out[i].payload == log[i].payload);
    CHECK(out[i].track_id == (log[i].track_id == 7 ? 3 : log[i].track_id));
  }
  CHECK(ids_of(out) == std::set<std::int64_t>{1, 2, 3, 6});
  // The merged id now covers all 20 frames once each.
  int rows3 = 0;
  for (const auto& r : out) rows3 += r.track_id == 3;
  CHECK(rows3 == 20);
}

TEST_CASE("merging co-occurring ids reports the frame") {
  const auto log = synthetic_log(true);
  try {
    merge_tracks(log, 7, 3);
    FAIL("expected MergeConflictError");
  } catch (const MergeConflictError& e) {
    CHECK(e.frame_index() == 12);
    CHECK(std::string(e.what()).find("12") != std::string::npos);
  }
}

TEST_CASE("merge_tracks no-op and precondition") {
  const auto log = synthetic_log();
  CHECK(merge_tracks(log, 42, 3) == log);
  CHECK_THROWS_AS(merge_tracks(log, 3, 3), ValidationError);
}

TEST_CASE("track log lines round-trip") {
  const Detection det = testing::detection_at({10, 20, 30, 60});
  TrackRecord r;
  r.frame_index = 5;
  r.track_id = 4;
  r.payload = make_payload(det, Label::kVictim);
  const std::string line = serialize_track_record(r);
  CHECK(line.find('\n') == std::string::npos);
  const TrackRecord back = parse_track_record(line);
  CHECK(back == r);
  CHECK(payload_detection(back.payload) == det);
  CHECK(payload_label(back.payload) == Label::kVictim);
  CHECK_FALSE(payload_label(make_payload(det)).has_value());

  std::stringstream io;
  write_track_log(io, synthetic_log());
  CHECK(read_track_log(io) == synthetic_log());
}

TEST_CASE("track log parse errors") {
  CHECK_THROWS_AS(parse_track_record("{\"frame_index\":1,"), ParseError);
  CHECK_THROWS_AS(parse_track_record(R"({"frame_index":1,"payload":{}})"), SchemaError);
}
