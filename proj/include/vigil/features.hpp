#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vigil/config.hpp"
#include "vigil/types.hpp"

namespace vigil {

inline constexpr int kDistanceFeatureDim = 24;
inline constexpr int kAngleFeatureDim = 12;

/// Virtual keypoints appended after the 17 COCO joints.
inline constexpr std::size_t kMidHip = 17;
inline constexpr std::size_t kMidShoulder = 18;

/// One frame's pose features for one person.
struct FeatureVector {
  FeatureMode mode = FeatureMode::kDistance;
  Eigen::VectorXd values;
  /// False where an endpoint fell below the confidence threshold; those
  /// entries are 0 here and get filled by the window buffer.
  std::vector<bool> observed;
  /// False marks a sentinel frame (degenerate pose); all values are 0.
  bool valid = true;

  Eigen::Index size() const { return values.size(); }
};

int feature_dim(FeatureMode mode);

/// Keypoint pairs of the distance features, in output order.
const std::array<std::pair<std::size_t, std::size_t>, kDistanceFeatureDim>& distance_pairs();

/// Torso length (mid-shoulder to mid-hip) when shoulders and hips are all
/// confident, otherwise the bbox diagonal. nullopt when both are zero.
std::optional<double> body_scale(const Pose& pose, const BBox& bbox, double conf_threshold);

/// 24 pairwise keypoint distances divided by body_scale.
FeatureVector distance_features(const Pose& pose, const BBox& bbox, const EngineConfig& cfg);

/// 12 angles in [0, pi]:
///   0-1   elbows L/R        (5-7-9, 6-8-10)
///   2-3   shoulders L/R     (7-5-11, 8-6-12)
///   4-5   hips L/R          (5-11-13, 6-12-14)
///   6-7   knees L/R         (11-13-15, 12-14-16)
///   8     torso twist       (shoulder line 5->6 vs hip line 11->12)
///   9     head tilt         (nose->mid-shoulder vs mid-shoulder->mid-hip)
///   10-11 arm raise L/R     (shoulder->wrist vs mid-shoulder->mid-hip)
/// A segment shorter than 1e-6 px makes its angle 0.
FeatureVector angle_features(const Pose& pose, const EngineConfig& cfg);

FeatureVector compute_features(const Pose& pose, const BBox& bbox, const EngineConfig& cfg);

}  // namespace vigil
