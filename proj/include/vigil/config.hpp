#pragma once

#include <string>
#include <string_view>

#include "vigil/types.hpp"

namespace vigil {

struct TrackerParams {
  double iou_gate = 0.3;
  int n_init = 3;
  /// Maximum consecutive misses (in processed frames) before deletion.
  int max_age = 30;
  /// Motion and observation noise, relative to box height.
  double std_weight_position = 1.0 / 20.0;
  double std_weight_velocity = 1.0 / 160.0;
};

struct EngineConfig {
  int input_fps = 30;
  int processing_fps = 10;
  int window_len = 10;
  FeatureMode feature_mode = FeatureMode::kDistance;
  double keypoint_conf_threshold = 0.3;
  double alert_prob_threshold = 0.5;
  int alert_consecutive_k = 3;
  /// Consecutive missed frames a window buffer bridges by repeating the last row.
  int max_carry = 3;
  TrackerParams tracker;
  /// stdout | file:PATH | tcp:HOST:PORT
  std::string sink = "stdout";

  /// Throws ValidationError if any field is out of range.
  void validate() const;

  int feature_dim() const { return feature_mode == FeatureMode::kDistance ? 24 : 12; }
};

/// Reads a JSON config document. Keys absent from the document keep their
/// defaults; the result is validated.
EngineConfig parse_config(std::string_view document);
EngineConfig load_config_file(const std::string& path);

/// "1s" -> 10, "2s" -> 20 (at the default processing rate).
int parse_window_spec(std::string_view text, int processing_fps);

}  // namespace vigil
