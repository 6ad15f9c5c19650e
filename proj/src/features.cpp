#include "vigil/features.hpp"

#include <cmath>

namespace vigil {

namespace {

constexpr double kMinSegment = 1e-6;

struct Point {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;
};

/// The 17 joints followed by mid-hip and mid-shoulder. A virtual point is as
/// confident as its least confident constituent.
std::array<Point, 19> extended_points(const Pose& pose) {
  std::array<Point, 19> pts;
  for (std::size_t i = 0; i < kNumKeypoints; ++i) {
    pts[i] = {pose[i].x, pose[i].y, pose[i].confidence};
  }
  auto mid = [&](std::size_t a, std::size_t b) {
    return Point{0.5 * (pose[a].x + pose[b].x), 0.5 * (pose[a].y + pose[b].y),
                 std::min(pose[a].confidence, pose[b].confidence)};
  };
  pts[kMidHip] = mid(kLeftHip, kRightHip);
  pts[kMidShoulder] = mid(kLeftShoulder, kRightShoulder);
  return pts;
}

/// Unsigned angle between two vectors, 0 if either is shorter than kMinSegment.
double vector_angle(double ux, double uy, double vx, double vy) {
  if (std::hypot(ux, uy) < kMinSegment || std::hypot(vx, vy) < kMinSegment) return 0.0;
  return std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
}

struct AngleSpec {
  // Angle between (a1 - a0) and (b1 - b0).
  std::size_t a0, a1, b0, b1;
};

constexpr std::array<AngleSpec, kAngleFeatureDim> kAngles = {{
    {kLeftElbow, kLeftShoulder, kLeftElbow, kLeftWrist},
    {kRightElbow, kRightShoulder, kRightElbow, kRightWrist},
    {kLeftShoulder, kLeftElbow, kLeftShoulder, kLeftHip},
    {kRightShoulder, kRightElbow, kRightShoulder, kRightHip},
    {kLeftHip, kLeftShoulder, kLeftHip, kLeftKnee},
    {kRightHip, kRightShoulder, kRightHip, kRightKnee},
    {kLeftKnee, kLeftHip, kLeftKnee, kLeftAnkle},
    {kRightKnee, kRightHip, kRightKnee, kRightAnkle},
    {kLeftShoulder, kRightShoulder, kLeftHip, kRightHip},
    {kNose, kMidShoulder, kMidShoulder, kMidHip},
    {kLeftShoulder, kLeftWrist, kMidShoulder, kMidHip},
    {kRightShoulder, kRightWrist, kMidShoulder, kMidHip},
}};

FeatureVector sentinel(FeatureMode mode) {
  FeatureVector fv;
  fv.mode = mode;
  fv.values = Eigen::VectorXd::Zero(feature_dim(mode));
  fv.observed.assign(static_cast<std::size_t>(feature_dim(mode)), false);
  fv.valid = false;
  return fv;
}

}  // namespace

int feature_dim(FeatureMode mode) {
  return mode == FeatureMode::kDistance ? kDistanceFeatureDim : kAngleFeatureDim;
}

const std::array<std::pair<std::size_t, std::size_t>, kDistanceFeatureDim>& distance_pairs() {
  static const std::array<std::pair<std::size_t, std::size_t>, kDistanceFeatureDim> pairs = {{
      {kNose, kLeftWrist},         {kNose, kRightWrist},       {kLeftWrist, kRightWrist},
      {kLeftWrist, kLeftShoulder}, {kRightWrist, kRightShoulder},
      {kLeftWrist, kRightShoulder}, {kRightWrist, kLeftShoulder},
      {kLeftWrist, kLeftHip},      {kRightWrist, kRightHip},   {kLeftElbow, kLeftHip},
      {kRightElbow, kRightHip},    {kNose, kMidHip},           {kLeftShoulder, kMidHip},
      {kRightShoulder, kMidHip},   {kLeftWrist, kMidHip},      {kRightWrist, kMidHip},
      {kLeftKnee, kRightKnee},     {kLeftAnkle, kRightAnkle},  {kLeftAnkle, kLeftHip},
      {kRightAnkle, kRightHip},    {kLeftWrist, kLeftKnee},    {kRightWrist, kRightKnee},
      {kNose, kLeftShoulder},      {kNose, kRightShoulder},
  }};
  return pairs;
}

std::optional<double> body_scale(const Pose& pose, const BBox& bbox, double conf_threshold) {
  const bool torso_confident =
      pose[kLeftShoulder].confidence >= conf_threshold &&
      pose[kRightShoulder].confidence >= conf_threshold &&
      pose[kLeftHip].confidence >= conf_threshold && pose[kRightHip].confidence >= conf_threshold;
  if (torso_confident) {
    const auto pts = extended_points(pose);
    const double torso = std::hypot(pts[kMidShoulder].x - pts[kMidHip].x,
                                    pts[kMidShoulder].y - pts[kMidHip].y);
    if (torso > 0.0) return torso;
  }
  const double diagonal = std::hypot(bbox.w, bbox.h);
  if (diagonal > 0.0) return diagonal;
  return std::nullopt;
}

FeatureVector distance_features(const Pose& pose, const BBox& bbox, const EngineConfig& cfg) {
  const auto scale = body_scale(pose, bbox, cfg.keypoint_conf_threshold);
  if (!scale) return sentinel(FeatureMode::kDistance);

  const auto pts = extended_points(pose);
  FeatureVector fv;
  fv.mode = FeatureMode::kDistance;
  fv.values.resize(kDistanceFeatureDim);
  fv.observed.resize(kDistanceFeatureDim);
  const auto& pairs = distance_pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Point& a = pts[pairs[i].first];
    const Point& b = pts[pairs[i].second];
    const bool seen = a.confidence >= cfg.keypoint_conf_threshold &&
                      b.confidence >= cfg.keypoint_conf_threshold;
    fv.observed[i] = seen;
    fv.values(static_cast<Eigen::Index>(i)) = seen ? std::hypot(a.x - b.x, a.y - b.y) / *scale : 0.0;
  }
  return fv;
}

FeatureVector angle_features(const Pose& pose, const EngineConfig& cfg) {
  const auto pts = extended_points(pose);
  FeatureVector fv;
  fv.mode = FeatureMode::kAngle;
  fv.values.resize(kAngleFeatureDim);
  fv.observed.resize(kAngleFeatureDim);
  bool any = false;
  for (std::size_t i = 0; i < kAngles.size(); ++i) {
    const AngleSpec& s = kAngles[i];
    const bool seen = pts[s.a0].confidence >= cfg.keypoint_conf_threshold &&
                      pts[s.a1].confidence >= cfg.keypoint_conf_threshold &&
                      pts[s.b0].confidence >= cfg.keypoint_conf_threshold &&
                      pts[s.b1].confidence >= cfg.keypoint_conf_threshold;
    fv.observed[i] = seen;
    any = any || seen;
    fv.values(static_cast<Eigen::Index>(i)) =
        seen ? vector_angle(pts[s.a1].x - pts[s.a0].x, pts[s.a1].y - pts[s.a0].y,
                            pts[s.b1].x - pts[s.b0].x, pts[s.b1].y - pts[s.b0].y)
             : 0.0;
  }
  if (!any) return sentinel(FeatureMode::kAngle);
  return fv;
}

FeatureVector compute_features(const Pose& pose, const BBox& bbox, const EngineConfig& cfg) {
  return cfg.feature_mode == FeatureMode::kDistance ? distance_features(pose, bbox, cfg)
                                                    : angle_features(pose, cfg);
}

}  // namespace vigil
