// vigil: command-line front end for the violence-detection engine.

#include <unistd.h>

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vigil/classifier.hpp"
#include "vigil/config.hpp"
#include "vigil/errors.hpp"
#include "vigil/features.hpp"
#include "vigil/net.hpp"
#include "vigil/pipeline.hpp"
#include "vigil/report.hpp"
#include "vigil/scenario.hpp"
#include "vigil/sink.hpp"
#include "vigil/stream_io.hpp"
#include "vigil/track_log.hpp"
#include "vigil/tracker.hpp"
#include "vigil/weights.hpp"
#include "vigil/window.hpp"

using namespace vigil;
using json = nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Opens `path` for reading, or stdin for "-".
class Input {
 public:
  explicit Input(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw Error("cannot open '" + path + "'");
    }
  }
  std::istream& stream() { return file_.is_open() ? file_ : std::cin; }

 private:
  std::ifstream file_;
};

/// Writes to `path`, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

/// Config options shared by run, track and features.
struct ConfigFlags {
  std::string config_path;
  int fps = 0;
  std::string window;
  std::string features;
  std::string sink;

  CLI::Option* fps_opt = nullptr;

  void add_to(CLI::App* app, bool with_sink) {
    app->add_option("--config", config_path, "JSON engine config file");
    fps_opt = app->add_option("--fps", fps, "input frame rate of the stream");
    app->add_option("--window", window, "window length: 1s or 2s");
    app->add_option("--features", features, "feature mode: distance or angle");
    if (with_sink) app->add_option("--sink", sink, "stdout | file:PATH | tcp:HOST:PORT");
  }

  EngineConfig resolve() const {
    EngineConfig cfg = config_path.empty() ? EngineConfig{} : load_config_file(config_path);
    if (fps_opt && fps_opt->count()) cfg.input_fps = fps;
    if (!window.empty()) cfg.window_len = parse_window_spec(window, cfg.processing_fps);
    if (!features.empty()) {
      const auto mode = parse_feature_mode(features);
      if (!mode) throw ValidationError("unknown feature mode '" + features + "'");
      cfg.feature_mode = *mode;
    }
    if (!sink.empty()) cfg.sink = sink;
    cfg.validate();
    return cfg;
  }
};

std::vector<std::int64_t> parse_id_list(const std::string& text) {
  std::vector<std::int64_t> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const long long v = std::stoll(item, &used);
    if (used != item.size()) throw ValidationError("bad track id '" + item + "'");
    ids.push_back(v);
  }
  return ids;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
    throw SchemaError("window: expected a non-empty array of rows");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != rows[0].size()) {
      throw SchemaError("window: ragged row " + std::to_string(r));
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (!rows[r][c].is_number()) throw SchemaError("window: non-numeric entry");
      const double v = rows[r][c].get<double>();
      if (!std::isfinite(v)) throw ValidationError("window: non-finite entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

int cmd_run(const ConfigFlags& flags, const std::string& input, const std::string& weights_path) {
  const EngineConfig cfg = flags.resolve();
  auto weights = std::make_shared<const ModelWeights>(load_weights_file(weights_path));
  auto sink = make_sink(cfg.sink);
  Engine engine(cfg, weights, *sink);

  RunSummary summary;
  if (input.rfind("tcp:", 0) == 0) {
    const auto hp = net::split_host_port(std::string_view(input).substr(4));
    if (!hp) throw ValidationError("bad input '" + input + "'");
    const int fd = net::connect_tcp(hp->first, hp->second);
    if (fd < 0) throw Error("cannot connect to " + input);
    net::LineReader reader(fd);
    summary = engine.run([&reader](std::string& line) { return reader.getline(line); });
    ::close(fd);
  } else {
    Input in(input);
    summary = engine.run(in.stream());
  }

  const PipelineStats& t = summary.totals;
  const double mean_ms =
      t.windows_classified ? 1e3 * t.classify_seconds_total / t.windows_classified : 0.0;
  std::cerr << "vigil: " << summary.lines << " frames read, " << t.frames_processed
            << " processed, " << t.windows_classified << " windows, " << summary.events
            << " events (" << summary.alerts << " alerts), " << summary.sink_errors
            << " sink errors\n"
            << "vigil: " << (summary.wall_seconds > 0 ? t.frames_processed / summary.wall_seconds : 0.0)
            << " processed frames/s, classification mean " << mean_ms << " ms, max "
            << 1e3 * t.classify_seconds_max << " ms\n";
  return summary.sink_errors ? 3 : 0;
}

int cmd_gen(const std::string& spec_path, const std::string& output) {
  const ScenarioSpec spec = parse_scenario_spec(read_file(spec_path));
  Output out(output);
  for (const Frame& f : gen_scenario(spec)) out.stream() << serialize_frame(f) << '\n';
  return 0;
}

int cmd_track(const ConfigFlags& flags, const std::string& input, const std::string& output) {
  const EngineConfig cfg = flags.resolve();
  Input in(input);
  Output out(output);
  std::map<std::string, Tracker> trackers;
  std::map<std::string, std::int64_t> last_index;
  std::string line;
  while (std::getline(in.stream(), line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Frame f = parse_frame(line);
    if (auto it = last_index.find(f.stream_id); it != last_index.end() && f.frame_index <= it->second) {
      throw SequencingError("stream '" + f.stream_id + "': frame_index " +
                            std::to_string(f.frame_index) + " after " + std::to_string(it->second));
    }
    last_index[f.stream_id] = f.frame_index;
    if (!decimate(f.frame_index, cfg.input_fps, cfg.processing_fps)) continue;
    Tracker& tracker = trackers.try_emplace(f.stream_id, cfg.tracker).first->second;
    const TrackerStep step = tracker.step(f.detections);
    auto assigned = step.matches;
    assigned.insert(assigned.end(), step.created.begin(), step.created.end());
    std::sort(assigned.begin(), assigned.end());
    for (const auto& [id, det] : assigned) {
      TrackRecord r;
      r.frame_index = f.frame_index;
      r.track_id = id;
      r.payload = make_payload(f.detections[static_cast<std::size_t>(det)]);
      r.payload["stream_id"] = f.stream_id;
      out.stream() << serialize_track_record(r) << '\n';
    }
  }
  return 0;
}

int cmd_features(const ConfigFlags& flags, const std::string& input, const std::string& output,
                 bool windows) {
  const EngineConfig cfg = flags.resolve();
  Input in(input);
  const std::vector<TrackRecord> records = read_track_log(in.stream());
  Output out(output);

  if (!windows) {
    for (const TrackRecord& r : records) {
      const Detection det = payload_detection(r.payload);
      const FeatureVector fv = compute_features(det.pose, det.bbox, cfg);
      nlohmann::ordered_json j;
      j["frame_index"] = r.frame_index;
      j["track_id"] = r.track_id;
      j["mode"] = to_string(fv.mode);
      j["valid"] = fv.valid;
      j["features"] = std::vector<double>(fv.values.data(), fv.values.data() + fv.values.size());
      j["observed"] = fv.observed;
      if (auto label = payload_label(r.payload)) j["label"] = to_string(*label);
      out.stream() << j.dump() << '\n';
    }
    return 0;
  }

  // Frames of the log define the processed timeline; a track without a record
  // at one of those frames (between its first and last record) has a miss.
  std::set<std::int64_t> timeline;
  std::map<std::int64_t, std::map<std::int64_t, const TrackRecord*>> by_track;
  for (const TrackRecord& r : records) {
    timeline.insert(r.frame_index);
    if (!by_track[r.track_id].emplace(r.frame_index, &r).second) {
      throw ValidationError("track " + std::to_string(r.track_id) + " has two records at frame " +
                            std::to_string(r.frame_index));
    }
  }
  for (const auto& [id, frames] : by_track) {
    WindowBuffer buffer(id, cfg.window_len, cfg.max_carry);
    const std::int64_t first = frames.begin()->first, last = frames.rbegin()->first;
    for (auto it = timeline.lower_bound(first); it != timeline.end() && *it <= last; ++it) {
      std::optional<Window> w;
      std::optional<Label> label;
      if (auto rec = frames.find(*it); rec != frames.end()) {
        const Detection det = payload_detection(rec->second->payload);
        w = buffer.push(*it, compute_features(det.pose, det.bbox, cfg));
        label = payload_label(rec->second->payload);
      } else {
        w = buffer.push_miss(*it);
      }
      if (!w) continue;
      nlohmann::ordered_json j;
      j["track_id"] = id;
      j["end_frame_index"] = w->end_frame_index;
      if (label) j["label"] = to_string(*label);
      j["window"] = matrix_json(w->matrix);
      out.stream() << j.dump() << '\n';
    }
  }
  return 0;
}

int cmd_classify(const std::string& input, const std::string& weights_path,
                 const std::string& output) {
  const ModelWeights weights = load_weights_file(weights_path);
  Input in(input);
  Output out(output);
  std::string line;
  while (std::getline(in.stream(), line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("window line: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
    }
    const json& rows = doc.is_object() ? doc.at("window") : doc;
    const ClassScores s = model_forward(matrix_from_json(rows), weights);
    nlohmann::ordered_json j;
    if (doc.is_object()) {
      if (doc.contains("track_id")) j["track_id"] = doc["track_id"];
      if (doc.contains("end_frame_index")) j["end_frame_index"] = doc["end_frame_index"];
    }
    j["label"] = to_string(argmax_label(s));
    j["probs"] = {{"neutral", s.probs[0]}, {"aggressor", s.probs[1]}, {"victim", s.probs[2]}};
    out.stream() << j.dump() << '\n';
  }
  return 0;
}

int cmd_init_weights(std::uint64_t seed, const std::vector<int>& dims, int kernel,
                     const std::string& output) {
  if (dims.size() != 4) throw ValidationError("--dims expects T,D,F,H");
  for (int d : dims) {
    if (d <= 0) throw ValidationError("--dims entries must be positive");
  }
  const ModelWeights w = init_test_weights(seed, {dims[0], dims[1], dims[2], dims[3], kernel});
  Output out(output);
  out.stream() << serialize_weights(w);
  return 0;
}

int cmd_annotate(const std::string& input, const std::string& output, const std::string& remove,
                 const std::vector<std::string>& merges) {
  Input in(input);
  std::vector<TrackRecord> records = read_track_log(in.stream());
  if (!remove.empty()) {
    const auto ids = parse_id_list(remove);
    records = remove_tracks(records, std::set<std::int64_t>(ids.begin(), ids.end()));
  }
  for (const std::string& m : merges) {
    const auto colon = m.find(':');
    if (colon == std::string::npos) throw ValidationError("--merge expects FROM:INTO, got '" + m + "'");
    const auto from = parse_id_list(m.substr(0, colon));
    const auto into = parse_id_list(m.substr(colon + 1));
    if (from.size() != 1 || into.size() != 1) throw ValidationError("--merge expects FROM:INTO");
    records = merge_tracks(records, from[0], into[0]);
  }
  Output out(output);
  write_track_log(out.stream(), records);
  return 0;
}

std::vector<Label> read_labels(const std::string& path) {
  Input in(path);
  std::vector<Label> labels;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in.stream(), line)) {
    ++n;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string text = line.substr(b, e - b + 1);
    const auto label = parse_label(text);
    if (!label) throw ValidationError(path + ":" + std::to_string(n) + ": unknown label '" + text + "'");
    labels.push_back(*label);
  }
  return labels;
}

int cmd_eval(const std::string& predictions, const std::string& truths, const std::string& json_out) {
  const Report r = evaluate(read_labels(predictions), read_labels(truths));
  std::cout << format_report(r) << '\n';
  if (json_out.empty()) {
    std::cout << report_json(r) << '\n';
  } else {
    Output out(json_out);
    out.stream() << report_json(r) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time pose-based violence detection engine"};
  app.require_subcommand(1);

  // run
  ConfigFlags run_flags;
  std::string run_input = "-", run_weights;
  CLI::App* run = app.add_subcommand("run", "process a frame stream and publish events");
  run_flags.add_to(run, true);
  run->add_option("--input", run_input, "frame lines: FILE, - for stdin, or tcp:HOST:PORT");
  run->add_option("--weights", run_weights, "model weight file")->required();

  // gen
  std::string gen_spec, gen_output = "-";
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic frame stream");
  gen->add_option("--spec", gen_spec, "scenario JSON file")->required();
  gen->add_option("-o,--output", gen_output, "output file (default stdout)");

  // track
  ConfigFlags track_flags;
  std::string track_input = "-", track_output = "-";
  CLI::App* track = app.add_subcommand("track", "track a frame stream and write a track log");
  track_flags.add_to(track, false);
  track->add_option("--input", track_input, "frame lines (default stdin)");
  track->add_option("-o,--output", track_output, "track log (default stdout)");

  // features
  ConfigFlags feat_flags;
  std::string feat_input = "-", feat_output = "-";
  bool feat_windows = false;
  CLI::App* features = app.add_subcommand("features", "compute per-frame features from a track log");
  feat_flags.add_to(features, false);
  features->add_option("--input", feat_input, "track log (default stdin)");
  features->add_option("-o,--output", feat_output, "output file (default stdout)");
  features->add_flag("--windows", feat_windows, "emit sliding windows instead of frames");

  // classify
  std::string cls_input = "-", cls_weights, cls_output = "-";
  CLI::App* classify = app.add_subcommand("classify", "classify window lines");
  classify->add_option("--input", cls_input, "window lines (default stdin)");
  classify->add_option("--weights", cls_weights, "model weight file")->required();
  classify->add_option("-o,--output", cls_output, "output file (default stdout)");

  // init-weights
  std::uint64_t iw_seed = 42;
  std::vector<int> iw_dims{10, 24, 64, 32};
  int iw_kernel = 3;
  std::string iw_output = "-";
  CLI::App* init = app.add_subcommand("init-weights", "write a deterministic test weight file");
  init->add_option("--seed", iw_seed, "generator seed");
  init->add_option("--dims", iw_dims, "T,D,F,H")->delimiter(',')->expected(4);
  init->add_option("--kernel", iw_kernel, "convolution kernel size (odd)");
  init->add_option("-o,--output", iw_output, "output file (default stdout)");

  // annotate
  std::string an_input = "-", an_output = "-", an_remove;
  std::vector<std::string> an_merge;
  CLI::App* annotate = app.add_subcommand("annotate", "remove or merge track ids in a track log");
  annotate->add_option("--input", an_input, "track log (default stdin)");
  annotate->add_option("-o,--output", an_output, "output file (default stdout)");
  annotate->add_option("--remove-ids", an_remove, "comma-separated ids to drop");
  annotate->add_option("--merge", an_merge, "FROM:INTO, repeatable; applied after removal");

  // eval
  std::string ev_pred, ev_truth, ev_json;
  CLI::App* eval = app.add_subcommand("eval", "score predicted labels against ground truth");
  eval->add_option("predictions", ev_pred, "predicted labels, one per line")->required();
  eval->add_option("truths", ev_truth, "true labels, one per line")->required();
  eval->add_option("--json", ev_json, "write the JSON report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_flags, run_input, run_weights);
    if (*gen) return cmd_gen(gen_spec, gen_output);
    if (*track) return cmd_track(track_flags, track_input, track_output);
    if (*features) return cmd_features(feat_flags, feat_input, feat_output, feat_windows);
    if (*classify) return cmd_classify(cls_input, cls_weights, cls_output);
    if (*init) return cmd_init_weights(iw_seed, iw_dims, iw_kernel, iw_output);
    if (*annotate) return cmd_annotate(an_input, an_output, an_remove, an_merge);
    if (*eval) return cmd_eval(ev_pred, ev_truth, ev_json);
  } catch (const std::exception& e) {
    std::cerr << "vigil: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
