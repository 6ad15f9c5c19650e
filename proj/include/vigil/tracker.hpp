#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "vigil/config.hpp"
#include "vigil/kalman.hpp"
#include "vigil/types.hpp"

namespace vigil {

enum class TrackStatus { kTentative, kConfirmed, kDeleted };

struct Track {
  std::int64_t id = 0;
  KalmanFilter<double>::State state;
  TrackStatus status = TrackStatus::kTentative;
  /// Matches since creation. A tentative track dies on its first miss, so
  /// until confirmation this is also the consecutive-match count.
  int hits = 0;
  int misses = 0;
  Pose last_pose{};

  /// Current Kalman estimate as a box.
  BBox bbox() const;
  bool is_confirmed() const { return status == TrackStatus::kConfirmed; }
};

struct TrackerStep {
  /// (track id, detection index) for existing tracks, in track order.
  std::vector<std::pair<std::int64_t, int>> matches;
  /// (new track id, detection index) for tracks spawned this step.
  std::vector<std::pair<std::int64_t, int>> created;
  std::vector<std::int64_t> deleted;
};

/// Optional extra association cost, added to 1 - IoU for gated pairs.
/// The default tracker is IoU-only.
using AppearanceCost = std::function<double(const Track&, const Detection&)>;

/// Single-stream multi-object tracker: constant-velocity Kalman prediction,
/// gated 1 - IoU cost, optimal assignment and tentative/confirmed/deleted
/// lifecycle. Track ids start at 1, increase with creation and are never reused.
class Tracker {
 public:
  explicit Tracker(TrackerParams params = {}, AppearanceCost appearance = nullptr);

  TrackerStep step(const std::vector<Detection>& detections);

  /// Live (tentative or confirmed) tracks in creation order.
  const std::vector<Track>& tracks() const { return tracks_; }
  const Track* find(std::int64_t id) const;
  std::int64_t next_id() const { return next_id_; }

 private:
  TrackerParams params_;
  AppearanceCost appearance_;
  KalmanFilter<double> kf_;
  std::vector<Track> tracks_;
  std::int64_t next_id_ = 1;
};

}  // namespace vigil
