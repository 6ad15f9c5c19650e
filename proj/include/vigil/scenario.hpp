#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vigil/types.hpp"

namespace vigil {

enum class PoseTemplate { kStanding, kWalking, kArmSwing };

struct PersonSpec {
  /// Mid-hip position at t = 0, pixels.
  double start_x = 0.0;
  double start_y = 0.0;
  /// Pixels per second.
  double velocity_x = 0.0;
  double velocity_y = 0.0;
  /// Standing height in pixels.
  double height = 170.0;
  PoseTemplate pose = PoseTemplate::kStanding;
  /// Limb swing amplitude (radians) and frequency (Hz); ignored when standing.
  double amplitude = 0.4;
  double frequency = 1.0;
  /// Seconds the person is in view; end < 0 means until the end.
  double enter_s = 0.0;
  double exit_s = -1.0;
};

struct ScenarioSpec {
  std::uint64_t seed = 0;
  double duration_s = 1.0;
  int fps = 30;
  double noise_std = 0.0;
  std::string stream_id = "synthetic";
  std::vector<PersonSpec> persons;
};

/// Reads a scenario JSON document:
///   {"seed", "duration_s", "fps", "noise_std", "stream_id",
///    "persons": [{"start": [x,y], "velocity": [vx,vy], "height",
///                 "template": "standing"|"walking"|"arm_swing",
///                 "amplitude", "frequency", "enter_s", "exit_s"}]}
ScenarioSpec parse_scenario_spec(std::string_view document);

/// round(duration_s * fps) frames. Each person is a rigid 17-keypoint template
/// moving at constant velocity with limbs rotating per template. Pixel noise
/// is drawn from SplitMix64(seed) (Box-Muller), in frame, person, keypoint,
/// x-then-y order, only when noise_std > 0. Boxes fit the keypoints with a 5%
/// margin on each side; all confidences and scores are 0.95.
std::vector<Frame> gen_scenario(const ScenarioSpec& spec);

/// The pose of one person at time t (no noise).
Pose template_pose(const PersonSpec& person, double t);

}  // namespace vigil
