#include "vigil/tracker.hpp"

#include <algorithm>

#include "vigil/assignment.hpp"
#include "vigil/geometry.hpp"

namespace vigil {

namespace {

// Larger than any achievable sum of gated costs, so the solver maximizes the
// number of admissible matches first. Pairs at this cost are discarded.
constexpr double kForbiddenCost = 1e3;

}  // namespace

BBox Track::bbox() const { return from_xyah(state.mean.head<4>()); }

Tracker::Tracker(TrackerParams params, AppearanceCost appearance)
    : params_(params),
      appearance_(std::move(appearance)),
      kf_(params.std_weight_position, params.std_weight_velocity) {}

const Track* Tracker::find(std::int64_t id) const {
  for (const Track& t : tracks_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

TrackerStep Tracker::step(const std::vector<Detection>& detections) {
  TrackerStep out;
  for (Track& t : tracks_) t.state = kf_.predict(t.state);

  const auto R = static_cast<Eigen::Index>(tracks_.size());
  const auto C = static_cast<Eigen::Index>(detections.size());
  Eigen::MatrixXd cost(R, C);
  for (Eigen::Index r = 0; r < R; ++r) {
    const BBox predicted = tracks_[r].bbox();
    for (Eigen::Index c = 0; c < C; ++c) {
      const double overlap = iou(predicted, detections[c].bbox);
      if (overlap < params_.iou_gate) {
        cost(r, c) = kForbiddenCost;
      } else {
        cost(r, c) = 1.0 - overlap;
        if (appearance_) cost(r, c) += appearance_(tracks_[r], detections[c]);
      }
    }
  }

  std::vector<int> det_of_track(tracks_.size(), -1);
  std::vector<char> det_used(detections.size(), 0);
  if (R > 0 && C > 0) {
    const Assignment assignment = hungarian(cost);
    for (const auto& [r, c] : assignment.pairs) {
      if (cost(r, c) >= kForbiddenCost) continue;
      det_of_track[r] = c;
      det_used[c] = 1;
    }
  }

  for (std::size_t r = 0; r < tracks_.size(); ++r) {
    Track& t = tracks_[r];
    const int c = det_of_track[r];
    if (c >= 0) {
      const Detection& det = detections[c];
      t.state = kf_.update(t.state, to_xyah(det.bbox));
      t.hits += 1;
      t.misses = 0;
      t.last_pose = det.pose;
      if (t.status == TrackStatus::kTentative && t.hits >= params_.n_init) {
        t.status = TrackStatus::kConfirmed;
      }
      out.matches.emplace_back(t.id, c);
    } else {
      t.misses += 1;
      if (t.status == TrackStatus::kTentative || t.misses > params_.max_age) {
        t.status = TrackStatus::kDeleted;
        out.deleted.push_back(t.id);
      }
    }
  }

  for (std::size_t c = 0; c < detections.size(); ++c) {
    if (det_used[c]) continue;
    Track t;
    t.id = next_id_++;
    t.state = kf_.initiate(to_xyah(detections[c].bbox));
    t.hits = 1;
    t.last_pose = detections[c].pose;
    t.status = t.hits >= params_.n_init ? TrackStatus::kConfirmed : TrackStatus::kTentative;
    tracks_.push_back(std::move(t));
    out.created.emplace_back(tracks_.back().id, static_cast<int>(c));
  }

  std::erase_if(tracks_, [](const Track& t) { return t.status == TrackStatus::kDeleted; });
  return out;
}

}  // namespace vigil
