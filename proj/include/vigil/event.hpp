#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vigil/classifier.hpp"
#include "vigil/config.hpp"
#include "vigil/types.hpp"

namespace vigil {

enum class EventKind { kClassification, kAlert };

struct Event {
  EventKind kind = EventKind::kClassification;
  std::string stream_id;
  std::int64_t track_id = 0;
  std::int64_t frame_index = 0;
  std::int64_t timestamp_ms = 0;
  Label label = Label::kNeutral;
  ClassScores scores;
  BBox bbox;

  friend bool operator==(const Event&, const Event&) = default;
};

/// One JSON line, keys in wire order, no trailing newline:
/// {"kind","stream_id","track_id","frame_index","timestamp_ms","label",
///  "probs":{"neutral","aggressor","victim"},"bbox":[x,y,w,h]}
std::string serialize_event(const Event& event);
Event parse_event(std::string_view line);

/// Consecutive qualifying classifications of one track.
struct DebounceState {
  int counter = 0;
  bool latched = false;
};

/// Counts a classification toward the alert streak when the label is not
/// neutral and its probability is >= alert_prob_threshold; anything else
/// resets the streak and the latch. Returns the label to alert on the call
/// where the streak reaches alert_consecutive_k, once per streak.
std::optional<Label> debounce_update(DebounceState& state, Label label, double prob,
                                     const EngineConfig& cfg);

}  // namespace vigil
