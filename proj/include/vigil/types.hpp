#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vigil {

inline constexpr std::size_t kNumKeypoints = 17;

/// COCO-17 keypoint indices.
enum Joint : std::size_t {
  kNose = 0,
  kLeftEye,
  kRightEye,
  kLeftEar,
  kRightEar,
  kLeftShoulder,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
  kLeftHip,
  kRightHip,
  kLeftKnee,
  kRightKnee,
  kLeftAnkle,
  kRightAnkle,
};

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

using Pose = std::array<Keypoint, kNumKeypoints>;

/// Axis-aligned box, top-left corner plus extent, in pixels.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double center_x() const { return x + 0.5 * w; }
  double center_y() const { return y + 0.5 * h; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Detection {
  BBox bbox;
  Pose pose{};
  double score = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct Frame {
  std::string stream_id;
  std::int64_t frame_index = 0;
  std::int64_t timestamp_ms = 0;
  std::vector<Detection> detections;

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Behaviour classes. The numeric order is the output order of the
/// classifier head and the tie-break priority of argmax.
enum class Label : int { kNeutral = 0, kAggressor = 1, kVictim = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Label, kNumClasses> kAllLabels = {
    Label::kNeutral, Label::kAggressor, Label::kVictim};

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

enum class FeatureMode { kDistance, kAngle };

std::string_view to_string(FeatureMode mode);
std::optional<FeatureMode> parse_feature_mode(std::string_view text);

}  // namespace vigil
