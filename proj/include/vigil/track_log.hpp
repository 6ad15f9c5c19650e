#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vigil/types.hpp"

namespace vigil {

/// One line of a track log:
///   {"frame_index": int, "track_id": int, "payload": {...}}
/// The payload is opaque to the annotation ops. Logs written by the tracker
/// carry {"bbox": [x,y,w,h], "keypoints": [[x,y,c] x17]} and optionally
/// "label" and "stream_id".
struct TrackRecord {
  std::int64_t frame_index = 0;
  std::int64_t track_id = 0;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();

  friend bool operator==(const TrackRecord&, const TrackRecord&) = default;
};

TrackRecord parse_track_record(std::string_view line);
std::string serialize_track_record(const TrackRecord& record);

std::vector<TrackRecord> read_track_log(std::istream& in);
void write_track_log(std::ostream& out, const std::vector<TrackRecord>& records);

/// Drops every record whose track id is in `ids`; survivors keep their order.
std::vector<TrackRecord> remove_tracks(const std::vector<TrackRecord>& records,
                                       const std::set<std::int64_t>& ids);

/// Relabels `from_id` as `into_id`. Throws MergeConflictError naming the first
/// frame in which both ids appear.
std::vector<TrackRecord> merge_tracks(const std::vector<TrackRecord>& records,
                                      std::int64_t from_id, std::int64_t into_id);

/// Payload helpers for tracker-written logs.
nlohmann::ordered_json make_payload(const Detection& det, std::optional<Label> label = {});
Detection payload_detection(const nlohmann::ordered_json& payload);
std::optional<Label> payload_label(const nlohmann::ordered_json& payload);

}  // namespace vigil
