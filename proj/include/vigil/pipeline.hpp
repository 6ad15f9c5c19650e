#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vigil/config.hpp"
#include "vigil/event.hpp"
#include "vigil/sink.hpp"
#include "vigil/tracker.hpp"
#include "vigil/weights.hpp"
#include "vigil/window.hpp"

namespace vigil {

struct PipelineStats {
  std::int64_t frames_seen = 0;
  std::int64_t frames_processed = 0;
  std::int64_t windows_classified = 0;
  double classify_seconds_total = 0.0;
  double classify_seconds_max = 0.0;
};

/// Per-stream pipeline: decimate -> track -> features -> window -> classify
/// -> debounce. Not thread-safe; run one instance per stream.
///
/// Every live track buffers features from its first frame, but only
/// confirmed tracks are classified.
class Pipeline {
 public:
  /// Throws ShapeError if the weights do not match cfg.window_len and the
  /// feature mode's dimension.
  Pipeline(std::string stream_id, EngineConfig cfg,
           std::shared_ptr<const ModelWeights> weights);

  /// Throws SequencingError unless frame_index strictly increases.
  std::vector<Event> process_frame(const Frame& frame);

  const Tracker& tracker() const { return tracker_; }
  const PipelineStats& stats() const { return stats_; }
  std::size_t buffered_tracks() const { return buffers_.size(); }

 private:
  std::string stream_id_;
  EngineConfig cfg_;
  std::shared_ptr<const ModelWeights> weights_;
  Tracker tracker_;
  std::map<std::int64_t, WindowBuffer> buffers_;
  std::map<std::int64_t, DebounceState> debounce_;
  std::optional<std::int64_t> last_frame_index_;
  PipelineStats stats_;
};

struct RunSummary {
  std::int64_t lines = 0;
  std::int64_t events = 0;
  std::int64_t alerts = 0;
  std::int64_t sink_errors = 0;
  PipelineStats totals;
  double wall_seconds = 0.0;
};

/// Multi-stream front end: dispatches frames to per-stream pipelines and
/// publishes their events. Sink failures are counted, not fatal.
class Engine {
 public:
  Engine(EngineConfig cfg, std::shared_ptr<const ModelWeights> weights, Sink& sink);

  /// Parses and processes one frame line. Returns the events it produced.
  std::vector<Event> process_line(std::string_view line);
  std::vector<Event> process(const Frame& frame);

  /// Reads frame lines until the source reports end of stream.
  RunSummary run(const std::function<bool(std::string&)>& next_line);
  RunSummary run(std::istream& in);

  const RunSummary& summary() const { return summary_; }

 private:
  EngineConfig cfg_;
  std::shared_ptr<const ModelWeights> weights_;
  Sink& sink_;
  std::map<std::string, Pipeline> pipelines_;
  RunSummary summary_;
};

}  // namespace vigil
