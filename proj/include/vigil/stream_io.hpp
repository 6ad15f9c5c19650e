#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "vigil/types.hpp"

namespace vigil {

/// Parses one line of the frame wire format:
///
///   {"stream_id": str, "frame_index": int, "timestamp_ms": int,
///    "detections": [{"bbox": [x,y,w,h], "score": num,
///                    "keypoints": [[x,y,c] x17]}]}
///
/// Throws ParseError (with byte offset) on malformed JSON, SchemaError on
/// missing keys or wrong shapes, ValidationError on out-of-domain values.
Frame parse_frame(std::string_view line);

/// Inverse of parse_frame. Produces a single line without the trailing newline.
std::string serialize_frame(const Frame& frame);

/// Validates the per-value invariants of a frame (finite coordinates,
/// confidences and scores in [0,1], positive box extents).
void validate_frame(const Frame& frame);

/// Index-based frame decimation: keep frame i iff
/// floor(i*p/q) > floor((i-1)*p/q), where p = processing_fps and q = input_fps.
/// Frame 0 is always kept.
constexpr bool decimate(std::int64_t frame_index, std::int64_t input_fps,
                        std::int64_t processing_fps) {
  if (frame_index <= 0) return true;
  return (frame_index * processing_fps) / input_fps >
         ((frame_index - 1) * processing_fps) / input_fps;
}

}  // namespace vigil
