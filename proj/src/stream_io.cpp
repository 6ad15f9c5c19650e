#include "vigil/stream_io.hpp"

#include <cmath>
#include <string>

#include "json_util.hpp"
#include "vigil/errors.hpp"

namespace vigil {

using detail::json;
using detail::ordered_json;

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kNeutral:
      return "neutral";
    case Label::kAggressor:
      return "aggressor";
    case Label::kVictim:
      return "victim";
  }
  return "neutral";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "neutral") return Label::kNeutral;
  if (text == "aggressor") return Label::kAggressor;
  if (text == "victim") return Label::kVictim;
  return std::nullopt;
}

std::string_view to_string(FeatureMode mode) {
  return mode == FeatureMode::kDistance ? "distance" : "angle";
}

std::optional<FeatureMode> parse_feature_mode(std::string_view text) {
  if (text == "distance") return FeatureMode::kDistance;
  if (text == "angle") return FeatureMode::kAngle;
  return std::nullopt;
}

namespace {

Detection parse_detection(const json& j, std::size_t index) {
  const std::string ctx = "detections[" + std::to_string(index) + "]";
  Detection det;

  const json& bbox = detail::as_array(detail::require(j, "bbox", ctx), ctx + ".bbox");
  if (bbox.size() != 4) {
    throw SchemaError(ctx + ".bbox: expected 4 values, got " +
                      std::to_string(bbox.size()));
  }
  det.bbox = {detail::as_number(bbox[0], ctx + ".bbox"),
              detail::as_number(bbox[1], ctx + ".bbox"),
              detail::as_number(bbox[2], ctx + ".bbox"),
              detail::as_number(bbox[3], ctx + ".bbox")};

  det.score = detail::as_number(detail::require(j, "score", ctx), ctx + ".score");

  const json& kps =
      detail::as_array(detail::require(j, "keypoints", ctx), ctx + ".keypoints");
  if (kps.size() != kNumKeypoints) {
    throw SchemaError(ctx + ": expected 17 keypoints, got " +
                      std::to_string(kps.size()));
  }
  for (std::size_t k = 0; k < kNumKeypoints; ++k) {
    const std::string kctx = ctx + ".keypoints[" + std::to_string(k) + "]";
    const json& kp = detail::as_array(kps[k], kctx);
    if (kp.size() != 3) {
      throw SchemaError(kctx + ": expected [x, y, confidence]");
    }
    det.pose[k] = {detail::as_number(kp[0], kctx), detail::as_number(kp[1], kctx),
                   detail::as_number(kp[2], kctx)};
  }
  return det;
}

}  // namespace

void validate_frame(const Frame& frame) {
  if (frame.frame_index < 0) {
    throw ValidationError("frame_index must be non-negative");
  }
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    const Detection& d = frame.detections[i];
    const std::string ctx = "detections[" + std::to_string(i) + "]";
    const BBox& b = d.bbox;
    if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.w) ||
        !std::isfinite(b.h)) {
      throw ValidationError(ctx + ".bbox: non-finite value");
    }
    if (!(b.w > 0.0) || !(b.h > 0.0)) {
      throw ValidationError(ctx + ".bbox: width and height must be positive");
    }
    if (!(d.score >= 0.0 && d.score <= 1.0)) {
      throw ValidationError(ctx + ".score: must lie in [0, 1]");
    }
    for (std::size_t k = 0; k < kNumKeypoints; ++k) {
      const Keypoint& kp = d.pose[k];
      if (!std::isfinite(kp.x) || !std::isfinite(kp.y)) {
        throw ValidationError(ctx + ".keypoints[" + std::to_string(k) +
                              "]: non-finite coordinate");
      }
      if (!(kp.confidence >= 0.0 && kp.confidence <= 1.0)) {
        throw ValidationError(ctx + ".keypoints[" + std::to_string(k) +
                              "]: confidence must lie in [0, 1]");
      }
    }
  }
}

Frame parse_frame(std::string_view line) {
  const json j = detail::parse_json(line);
  if (!j.is_object()) throw SchemaError("frame: expected a JSON object");

  Frame frame;
  const json& sid = detail::require(j, "stream_id", "frame");
  if (!sid.is_string()) throw SchemaError("frame.stream_id: expected a string");
  frame.stream_id = sid.get<std::string>();
  frame.frame_index =
      detail::as_integer(detail::require(j, "frame_index", "frame"), "frame.frame_index");
  frame.timestamp_ms = detail::as_integer(detail::require(j, "timestamp_ms", "frame"),
                                          "frame.timestamp_ms");

  const json& dets =
      detail::as_array(detail::require(j, "detections", "frame"), "frame.detections");
  frame.detections.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    frame.detections.push_back(parse_detection(dets[i], i));
  }
  validate_frame(frame);
  return frame;
}

std::string serialize_frame(const Frame& frame) {
  ordered_json j;
  j["stream_id"] = frame.stream_id;
  j["frame_index"] = frame.frame_index;
  j["timestamp_ms"] = frame.timestamp_ms;
  ordered_json dets = ordered_json::array();
  for (const Detection& d : frame.detections) {
    ordered_json dj;
    dj["bbox"] = {d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h};
    dj["score"] = d.score;
    ordered_json kps = ordered_json::array();
    for (const Keypoint& kp : d.pose) kps.push_back({kp.x, kp.y, kp.confidence});
    dj["keypoints"] = std::move(kps);
    dets.push_back(std::move(dj));
  }
  j["detections"] = std::move(dets);
  return j.dump();
}

}  // namespace vigil
