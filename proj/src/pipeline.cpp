#include "vigil/pipeline.hpp"

#include <chrono>
#include <iostream>
#include <set>

#include "vigil/classifier.hpp"
#include "vigil/errors.hpp"
#include "vigil/features.hpp"
#include "vigil/stream_io.hpp"

namespace vigil {

Pipeline::Pipeline(std::string stream_id, EngineConfig cfg,
                   std::shared_ptr<const ModelWeights> weights)
    : stream_id_(std::move(stream_id)),
      cfg_(std::move(cfg)),
      weights_(std::move(weights)),
      tracker_(cfg_.tracker) {
  cfg_.validate();
  if (!weights_) throw Error("pipeline: no weights");
  if (weights_->meta.window_len != cfg_.window_len ||
      weights_->meta.feature_dim != cfg_.feature_dim()) {
    throw ShapeError("weights expect [" + std::to_string(weights_->meta.window_len) + "][" +
                     std::to_string(weights_->meta.feature_dim) + "] windows but config gives [" +
                     std::to_string(cfg_.window_len) + "][" +
                     std::to_string(cfg_.feature_dim()) + "]");
  }
}

std::vector<Event> Pipeline::process_frame(const Frame& frame) {
  if (last_frame_index_ && frame.frame_index <= *last_frame_index_) {
    throw SequencingError("stream '" + stream_id_ + "': frame_index " +
                          std::to_string(frame.frame_index) + " after " +
                          std::to_string(*last_frame_index_));
  }
  last_frame_index_ = frame.frame_index;
  ++stats_.frames_seen;
  if (!decimate(frame.frame_index, cfg_.input_fps, cfg_.processing_fps)) return {};
  ++stats_.frames_processed;

  const TrackerStep step = tracker_.step(frame.detections);
  for (std::int64_t id : step.deleted) {
    buffers_.erase(id);
    debounce_.erase(id);
  }
  std::map<std::int64_t, int> detection_of;
  for (const auto& [id, det] : step.matches) detection_of[id] = det;
  for (const auto& [id, det] : step.created) detection_of[id] = det;

  std::vector<Event> events;
  for (const Track& track : tracker_.tracks()) {
    auto [it, inserted] = buffers_.try_emplace(track.id, track.id, cfg_.window_len, cfg_.max_carry);
    WindowBuffer& buffer = it->second;

    std::optional<Window> window;
    if (auto d = detection_of.find(track.id); d != detection_of.end()) {
      const Detection& det = frame.detections[static_cast<std::size_t>(d->second)];
      window = buffer.push(frame.frame_index, compute_features(det.pose, det.bbox, cfg_));
    } else {
      window = buffer.push_miss(frame.frame_index);
    }
    if (!window || !track.is_confirmed()) continue;

    const auto start = std::chrono::steady_clock::now();
    const ClassScores scores = model_forward(window->matrix, *weights_);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ++stats_.windows_classified;
    stats_.classify_seconds_total += elapsed;
    stats_.classify_seconds_max = std::max(stats_.classify_seconds_max, elapsed);

    Event ev;
    ev.kind = EventKind::kClassification;
    ev.stream_id = stream_id_;
    ev.track_id = track.id;
    ev.frame_index = frame.frame_index;
    ev.timestamp_ms = frame.timestamp_ms;
    ev.label = argmax_label(scores);
    ev.scores = scores;
    ev.bbox = track.bbox();
    events.push_back(ev);

    if (auto alert = debounce_update(debounce_[track.id], ev.label, scores[ev.label], cfg_)) {
      ev.kind = EventKind::kAlert;
      ev.label = *alert;
      events.push_back(std::move(ev));
    }
  }
  return events;
}

Engine::Engine(EngineConfig cfg, std::shared_ptr<const ModelWeights> weights, Sink& sink)
    : cfg_(std::move(cfg)), weights_(std::move(weights)), sink_(sink) {}

std::vector<Event> Engine::process(const Frame& frame) {
  auto it = pipelines_.find(frame.stream_id);
  if (it == pipelines_.end()) {
    it = pipelines_.try_emplace(frame.stream_id, frame.stream_id, cfg_, weights_).first;
  }
  std::vector<Event> events = it->second.process_frame(frame);
  for (const Event& ev : events) {
    ++summary_.events;
    if (ev.kind == EventKind::kAlert) ++summary_.alerts;
    const Ack ack = sink_.publish(ev);
    if (!ack.ok) {
      ++summary_.sink_errors;
      std::cerr << "vigil: sink error: " << ack.error << '\n';
    }
  }
  return events;
}

std::vector<Event> Engine::process_line(std::string_view line) {
  ++summary_.lines;
  return process(parse_frame(line));
}

RunSummary Engine::run(std::istream& in) {
  return run([&in](std::string& line) { return static_cast<bool>(std::getline(in, line)); });
}

RunSummary Engine::run(const std::function<bool(std::string&)>& next_line) {
  const auto start = std::chrono::steady_clock::now();
  std::string line;
  while (next_line(line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    process_line(line);
  }
  summary_.wall_seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary_.totals = {};
  for (const auto& [id, p] : pipelines_) {
    const PipelineStats& s = p.stats();
    summary_.totals.frames_seen += s.frames_seen;
    summary_.totals.frames_processed += s.frames_processed;
    summary_.totals.windows_classified += s.windows_classified;
    summary_.totals.classify_seconds_total += s.classify_seconds_total;
    summary_.totals.classify_seconds_max =
        std::max(summary_.totals.classify_seconds_max, s.classify_seconds_max);
  }
  return summary_;
}

}  // namespace vigil
