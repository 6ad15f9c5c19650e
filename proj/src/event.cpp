#include "vigil/event.hpp"

#include "json_util.hpp"

namespace vigil {

using detail::json;
using detail::ordered_json;

std::string serialize_event(const Event& e) {
  ordered_json j;
  j["kind"] = e.kind == EventKind::kAlert ? "alert" : "classification";
  j["stream_id"] = e.stream_id;
  j["track_id"] = e.track_id;
  j["frame_index"] = e.frame_index;
  j["timestamp_ms"] = e.timestamp_ms;
  j["label"] = std::string(to_string(e.label));
  ordered_json probs;
  for (Label l : kAllLabels) probs[std::string(to_string(l))] = e.scores[l];
  j["probs"] = std::move(probs);
  j["bbox"] = {e.bbox.x, e.bbox.y, e.bbox.w, e.bbox.h};
  return j.dump();
}

Event parse_event(std::string_view line) {
  const json j = detail::parse_json(line);
  Event e;
  const json& kind = detail::require(j, "kind", "event");
  if (kind == "alert") {
    e.kind = EventKind::kAlert;
  } else if (kind == "classification") {
    e.kind = EventKind::kClassification;
  } else {
    throw SchemaError("event.kind: expected classification|alert");
  }
  e.stream_id = detail::require(j, "stream_id", "event").get<std::string>();
  e.track_id = detail::as_integer(detail::require(j, "track_id", "event"), "event.track_id");
  e.frame_index =
      detail::as_integer(detail::require(j, "frame_index", "event"), "event.frame_index");
  e.timestamp_ms =
      detail::as_integer(detail::require(j, "timestamp_ms", "event"), "event.timestamp_ms");
  auto label = parse_label(detail::require(j, "label", "event").get<std::string>());
  if (!label) throw SchemaError("event.label: unknown label");
  e.label = *label;
  const json& probs = detail::require(j, "probs", "event");
  for (Label l : kAllLabels) {
    const std::string key(to_string(l));
    e.scores.probs[static_cast<std::size_t>(l)] =
        detail::as_number(detail::require(probs, key.c_str(), "event.probs"), "event.probs");
  }
  const json& bbox = detail::as_array(detail::require(j, "bbox", "event"), "event.bbox");
  if (bbox.size() != 4) throw SchemaError("event.bbox: expected 4 values");
  e.bbox = {detail::as_number(bbox[0], "event.bbox"), detail::as_number(bbox[1], "event.bbox"),
            detail::as_number(bbox[2], "event.bbox"), detail::as_number(bbox[3], "event.bbox")};
  return e;
}

std::optional<Label> debounce_update(DebounceState& state, Label label, double prob,
                                     const EngineConfig& cfg) {
  if (label == Label::kNeutral || prob < cfg.alert_prob_threshold) {
    state.counter = 0;
    state.latched = false;
    return std::nullopt;
  }
  ++state.counter;
  if (state.counter >= cfg.alert_consecutive_k && !state.latched) {
    state.latched = true;
    return label;
  }
  return std::nullopt;
}

}  // namespace vigil
