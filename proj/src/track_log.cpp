#include "vigil/track_log.hpp"

#include <map>

#include "json_util.hpp"
#include "vigil/errors.hpp"
#include "vigil/stream_io.hpp"

namespace vigil {

using detail::ordered_json;

TrackRecord parse_track_record(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line.begin(), line.end());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError("track log: parse error at byte " + std::to_string(e.byte), e.byte);
  }
  if (!j.is_object()) throw SchemaError("track log: expected a JSON object");
  TrackRecord rec;
  auto fi = j.find("frame_index");
  auto ti = j.find("track_id");
  if (fi == j.end() || ti == j.end()) {
    throw SchemaError("track log: records need frame_index and track_id");
  }
  if (!fi->is_number_integer() || !ti->is_number_integer()) {
    throw SchemaError("track log: frame_index and track_id must be integers");
  }
  rec.frame_index = fi->get<std::int64_t>();
  rec.track_id = ti->get<std::int64_t>();
  if (auto pi = j.find("payload"); pi != j.end()) rec.payload = *pi;
  return rec;
}

std::string serialize_track_record(const TrackRecord& record) {
  ordered_json j;
  j["frame_index"] = record.frame_index;
  j["track_id"] = record.track_id;
  j["payload"] = record.payload;
  return j.dump();
}

std::vector<TrackRecord> read_track_log(std::istream& in) {
  std::vector<TrackRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(parse_track_record(line));
  }
  return records;
}

void write_track_log(std::ostream& out, const std::vector<TrackRecord>& records) {
  for (const auto& r : records) out << serialize_track_record(r) << '\n';
}

std::vector<TrackRecord> remove_tracks(const std::vector<TrackRecord>& records,
                                       const std::set<std::int64_t>& ids) {
  std::vector<TrackRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!ids.contains(r.track_id)) out.push_back(r);
  }
  return out;
}

std::vector<TrackRecord> merge_tracks(const std::vector<TrackRecord>& records,
                                      std::int64_t from_id, std::int64_t into_id) {
  if (from_id == into_id) {
    throw ValidationError("merge_tracks: from and into ids must differ");
  }
  // frame -> bit 1 for from_id present, bit 2 for into_id present
  std::map<std::int64_t, int> presence;
  for (const auto& r : records) {
    if (r.track_id == from_id) presence[r.frame_index] |= 1;
    if (r.track_id == into_id) presence[r.frame_index] |= 2;
  }
  for (const auto& [frame, bits] : presence) {
    if (bits == 3) {
      throw MergeConflictError("merge conflict: tracks " + std::to_string(from_id) +
                                   " and " + std::to_string(into_id) +
                                   " both present at frame " + std::to_string(frame),
                               frame);
    }
  }
  std::vector<TrackRecord> out = records;
  for (auto& r : out) {
    if (r.track_id == from_id) r.track_id = into_id;
  }
  return out;
}

ordered_json make_payload(const Detection& det, std::optional<Label> label) {
  ordered_json p;
  p["bbox"] = {det.bbox.x, det.bbox.y, det.bbox.w, det.bbox.h};
  p["score"] = det.score;
  ordered_json kps = ordered_json::array();
  for (const Keypoint& kp : det.pose) kps.push_back({kp.x, kp.y, kp.confidence});
  p["keypoints"] = std::move(kps);
  if (label) p["label"] = std::string(to_string(*label));
  return p;
}

Detection payload_detection(const ordered_json& payload) {
  // Reuse the frame parser's validation by wrapping the payload as a frame.
  ordered_json frame;
  frame["stream_id"] = "";
  frame["frame_index"] = 0;
  frame["timestamp_ms"] = 0;
  ordered_json det;
  det["bbox"] = payload.contains("bbox") ? payload["bbox"] : ordered_json();
  det["score"] = payload.contains("score") ? payload["score"] : ordered_json(1.0);
  det["keypoints"] = payload.contains("keypoints") ? payload["keypoints"] : ordered_json();
  frame["detections"] = ordered_json::array({det});
  return parse_frame(frame.dump()).detections.front();
}

std::optional<Label> payload_label(const ordered_json& payload) {
  auto it = payload.find("label");
  if (it == payload.end() || !it->is_string()) return std::nullopt;
  return parse_label(it->get<std::string>());
}

}  // namespace vigil
