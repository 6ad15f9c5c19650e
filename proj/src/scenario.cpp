#include "vigil/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json_util.hpp"
#include "vigil/rng.hpp"

namespace vigil {

namespace {

using detail::json;

constexpr double kConfidence = 0.95;
constexpr double kMargin = 0.05;

/// Standing skeleton in units of body height, origin at mid-hip, y down.
constexpr std::array<std::array<double, 2>, kNumKeypoints> kStandingTemplate = {{
    {0.00, -0.45},   // nose
    {0.02, -0.47},   // left eye
    {-0.02, -0.47},  // right eye
    {0.04, -0.46},   // left ear
    {-0.04, -0.46},  // right ear
    {0.11, -0.32},   // left shoulder
    {-0.11, -0.32},  // right shoulder
    {0.13, -0.17},   // left elbow
    {-0.13, -0.17},  // right elbow
    {0.14, -0.03},   // left wrist
    {-0.14, -0.03},  // right wrist
    {0.07, 0.00},    // left hip
    {-0.07, 0.00},   // right hip
    {0.08, 0.24},    // left knee
    {-0.08, 0.24},   // right knee
    {0.08, 0.48},    // left ankle
    {-0.08, 0.48},   // right ankle
}};

using P2 = std::array<double, 2>;

P2 rotate_about(const P2& p, const P2& pivot, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double dx = p[0] - pivot[0], dy = p[1] - pivot[1];
  return {pivot[0] + c * dx - s * dy, pivot[1] + s * dx + c * dy};
}

PoseTemplate parse_template(const std::string& name) {
  if (name == "standing") return PoseTemplate::kStanding;
  if (name == "walking") return PoseTemplate::kWalking;
  if (name == "arm_swing") return PoseTemplate::kArmSwing;
  throw ValidationError("scenario: unknown template '" + name + "'");
}

double number_or(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : detail::as_number(*it, std::string("scenario.") + key);
}

P2 pair_or(const json& j, const char* key, P2 fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  const json& arr = detail::as_array(*it, key);
  if (arr.size() != 2) throw SchemaError(std::string("scenario.") + key + ": expected [x, y]");
  return {detail::as_number(arr[0], key), detail::as_number(arr[1], key)};
}

}  // namespace

ScenarioSpec parse_scenario_spec(std::string_view document) {
  const json j = detail::parse_json(document);
  if (!j.is_object()) throw SchemaError("scenario: expected a JSON object");
  ScenarioSpec spec;
  if (auto it = j.find("seed"); it != j.end()) {
    spec.seed = static_cast<std::uint64_t>(detail::as_integer(*it, "scenario.seed"));
  }
  spec.duration_s = number_or(j, "duration_s", spec.duration_s);
  if (auto it = j.find("fps"); it != j.end()) {
    spec.fps = static_cast<int>(detail::as_integer(*it, "scenario.fps"));
  }
  spec.noise_std = number_or(j, "noise_std", spec.noise_std);
  if (auto it = j.find("stream_id"); it != j.end()) spec.stream_id = it->get<std::string>();
  if (spec.fps <= 0 || spec.duration_s < 0 || spec.noise_std < 0) {
    throw ValidationError("scenario: fps > 0, duration_s >= 0 and noise_std >= 0 required");
  }
  if (auto it = j.find("persons"); it != j.end()) {
    for (const json& pj : detail::as_array(*it, "scenario.persons")) {
      PersonSpec p;
      const P2 start = pair_or(pj, "start", {p.start_x, p.start_y});
      const P2 vel = pair_or(pj, "velocity", {p.velocity_x, p.velocity_y});
      p.start_x = start[0];
      p.start_y = start[1];
      p.velocity_x = vel[0];
      p.velocity_y = vel[1];
      p.height = number_or(pj, "height", p.height);
      if (auto t = pj.find("template"); t != pj.end()) p.pose = parse_template(t->get<std::string>());
      p.amplitude = number_or(pj, "amplitude", p.amplitude);
      p.frequency = number_or(pj, "frequency", p.frequency);
      p.enter_s = number_or(pj, "enter_s", p.enter_s);
      p.exit_s = number_or(pj, "exit_s", p.exit_s);
      if (!(p.height > 0)) throw ValidationError("scenario: person height must be positive");
      spec.persons.push_back(p);
    }
  }
  return spec;
}

Pose template_pose(const PersonSpec& person, double t) {
  std::array<P2, kNumKeypoints> pts;
  for (std::size_t k = 0; k < kNumKeypoints; ++k) {
    pts[k] = {kStandingTemplate[k][0] * person.height, kStandingTemplate[k][1] * person.height};
  }
  const double phase = 2.0 * std::numbers::pi * person.frequency * t;
  const double swing = person.amplitude * std::sin(phase);

  auto swing_limb = [&](std::size_t pivot, std::size_t mid, std::size_t end, double angle) {
    pts[mid] = rotate_about(pts[mid], pts[pivot], angle);
    pts[end] = rotate_about(pts[end], pts[pivot], angle);
  };
  switch (person.pose) {
    case PoseTemplate::kStanding:
      break;
    case PoseTemplate::kWalking:
      swing_limb(kLeftHip, kLeftKnee, kLeftAnkle, swing);
      swing_limb(kRightHip, kRightKnee, kRightAnkle, -swing);
      swing_limb(kLeftShoulder, kLeftElbow, kLeftWrist, -0.5 * swing);
      swing_limb(kRightShoulder, kRightElbow, kRightWrist, 0.5 * swing);
      break;
    case PoseTemplate::kArmSwing:
      // Arms swing outward and up, mirrored left/right.
      swing_limb(kLeftShoulder, kLeftElbow, kLeftWrist, -std::abs(swing) * 2.0);
      swing_limb(kRightShoulder, kRightElbow, kRightWrist, std::abs(swing) * 2.0);
      break;
  }

  const double cx = person.start_x + person.velocity_x * t;
  const double cy = person.start_y + person.velocity_y * t;
  Pose pose;
  for (std::size_t k = 0; k < kNumKeypoints; ++k) {
    pose[k] = {cx + pts[k][0], cy + pts[k][1], kConfidence};
  }
  return pose;
}

std::vector<Frame> gen_scenario(const ScenarioSpec& spec) {
  const auto n = static_cast<std::int64_t>(std::llround(spec.duration_s * spec.fps));
  SplitMix64 rng(spec.seed);
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.fps;
    Frame f;
    f.stream_id = spec.stream_id;
    f.frame_index = i;
    f.timestamp_ms = std::llround(1000.0 * static_cast<double>(i) / spec.fps);
    for (const PersonSpec& person : spec.persons) {
      if (t < person.enter_s || (person.exit_s >= 0.0 && t >= person.exit_s)) continue;
      Detection det;
      det.pose = template_pose(person, t);
      if (spec.noise_std > 0.0) {
        for (Keypoint& kp : det.pose) {
          kp.x += spec.noise_std * rng.normal();
          kp.y += spec.noise_std * rng.normal();
        }
      }
      double x0 = det.pose[0].x, x1 = x0, y0 = det.pose[0].y, y1 = y0;
      for (const Keypoint& kp : det.pose) {
        x0 = std::min(x0, kp.x);
        x1 = std::max(x1, kp.x);
        y0 = std::min(y0, kp.y);
        y1 = std::max(y1, kp.y);
      }
      const double w = std::max(x1 - x0, 1.0);
      const double h = std::max(y1 - y0, 1.0);
      det.bbox = {x0 - kMargin * w, y0 - kMargin * h, w * (1 + 2 * kMargin),
                  h * (1 + 2 * kMargin)};
      det.score = kConfidence;
      f.detections.push_back(det);
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace vigil
