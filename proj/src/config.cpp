#include "vigil/config.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "vigil/errors.hpp"

namespace vigil {

using detail::json;

void EngineConfig::validate() const {
  if (processing_fps <= 0 || input_fps <= 0 || processing_fps > input_fps) {
    throw ValidationError("config: require 0 < processing_fps <= input_fps");
  }
  if (window_len != 10 && window_len != 20) {
    throw ValidationError("config: window_len must be 10 or 20");
  }
  if (!(keypoint_conf_threshold >= 0.0 && keypoint_conf_threshold <= 1.0)) {
    throw ValidationError("config: keypoint_conf_threshold must lie in [0, 1]");
  }
  if (!(alert_prob_threshold >= 0.0 && alert_prob_threshold <= 1.0)) {
    throw ValidationError("config: alert_prob_threshold must lie in [0, 1]");
  }
  if (alert_consecutive_k < 1) {
    throw ValidationError("config: alert_consecutive_k must be >= 1");
  }
  if (max_carry < 0) throw ValidationError("config: max_carry must be >= 0");
  if (!(tracker.iou_gate >= 0.0 && tracker.iou_gate <= 1.0)) {
    throw ValidationError("config: tracker.iou_gate must lie in [0, 1]");
  }
  if (tracker.n_init < 1 || tracker.max_age < 0) {
    throw ValidationError("config: tracker.n_init >= 1 and tracker.max_age >= 0");
  }
  if (!(tracker.std_weight_position > 0.0) || !(tracker.std_weight_velocity > 0.0)) {
    throw ValidationError("config: tracker noise weights must be positive");
  }
}

namespace {

int get_int(const json& j, const char* key, int fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return static_cast<int>(detail::as_integer(*it, std::string("config.") + key));
}

double get_number(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return detail::as_number(*it, std::string("config.") + key);
}

}  // namespace

EngineConfig parse_config(std::string_view document) {
  const json j = detail::parse_json(document);
  if (!j.is_object()) throw SchemaError("config: expected a JSON object");

  EngineConfig cfg;
  cfg.input_fps = get_int(j, "input_fps", cfg.input_fps);
  cfg.processing_fps = get_int(j, "processing_fps", cfg.processing_fps);
  cfg.window_len = get_int(j, "window_len", cfg.window_len);
  if (auto it = j.find("feature_mode"); it != j.end()) {
    if (!it->is_string()) throw SchemaError("config.feature_mode: expected a string");
    auto mode = parse_feature_mode(it->get<std::string>());
    if (!mode) throw ValidationError("config.feature_mode: expected distance|angle");
    cfg.feature_mode = *mode;
  }
  cfg.keypoint_conf_threshold =
      get_number(j, "keypoint_conf_threshold", cfg.keypoint_conf_threshold);
  cfg.alert_prob_threshold = get_number(j, "alert_prob_threshold", cfg.alert_prob_threshold);
  cfg.alert_consecutive_k = get_int(j, "alert_consecutive_k", cfg.alert_consecutive_k);
  cfg.max_carry = get_int(j, "max_carry", cfg.max_carry);

  if (auto it = j.find("tracker"); it != j.end()) {
    if (!it->is_object()) throw SchemaError("config.tracker: expected an object");
    const json& t = *it;
    cfg.tracker.iou_gate = get_number(t, "iou_gate", cfg.tracker.iou_gate);
    cfg.tracker.n_init = get_int(t, "n_init", cfg.tracker.n_init);
    cfg.tracker.max_age = get_int(t, "max_age", cfg.tracker.max_age);
    cfg.tracker.std_weight_position =
        get_number(t, "std_weight_position", cfg.tracker.std_weight_position);
    cfg.tracker.std_weight_velocity =
        get_number(t, "std_weight_velocity", cfg.tracker.std_weight_velocity);
  }
  if (auto it = j.find("sink"); it != j.end()) {
    if (!it->is_string()) throw SchemaError("config.sink: expected a string");
    cfg.sink = it->get<std::string>();
  }
  cfg.validate();
  return cfg;
}

EngineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

int parse_window_spec(std::string_view text, int processing_fps) {
  if (text == "1s") return processing_fps;
  if (text == "2s") return 2 * processing_fps;
  throw ValidationError("window must be 1s or 2s");
}

}  // namespace vigil
