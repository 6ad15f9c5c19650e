#include "vigil/window.hpp"

#include <string>

#include "vigil/errors.hpp"

namespace vigil {

WindowBuffer::WindowBuffer(std::int64_t track_id, int window_len, int max_carry)
    : track_id_(track_id), window_len_(window_len), max_carry_(max_carry) {
  if (window_len <= 0) throw ValidationError("window length must be positive");
}

void WindowBuffer::clear() {
  rows_.clear();
  last_.reset();
  staleness_.clear();
}

std::optional<Window> WindowBuffer::append(std::int64_t frame_index, Eigen::VectorXd row) {
  appended_ = true;
  last_ = row;
  rows_.push_back(std::move(row));
  if (rows_.size() > static_cast<std::size_t>(window_len_)) rows_.pop_front();
  if (rows_.size() < static_cast<std::size_t>(window_len_)) return std::nullopt;

  Window w;
  w.track_id = track_id_;
  w.end_frame_index = frame_index;
  w.matrix.resize(window_len_, rows_.front().size());
  for (int t = 0; t < window_len_; ++t) w.matrix.row(t) = rows_[t].transpose();
  return w;
}

std::optional<Window> WindowBuffer::push(std::int64_t frame_index, const FeatureVector& fv) {
  if (!fv.valid) return push_miss(frame_index);
  misses_ = 0;
  if (last_ && last_->size() != fv.size()) clear();

  Eigen::VectorXd row = fv.values;
  staleness_.resize(static_cast<std::size_t>(fv.size()), 0);
  for (Eigen::Index i = 0; i < fv.size(); ++i) {
    auto& stale = staleness_[static_cast<std::size_t>(i)];
    if (fv.observed[static_cast<std::size_t>(i)]) {
      stale = 0;
      continue;
    }
    ++stale;
    row(i) = (last_ && stale <= max_carry_) ? (*last_)(i) : 0.0;
  }
  return append(frame_index, std::move(row));
}

std::optional<Window> WindowBuffer::push_miss(std::int64_t frame_index) {
  appended_ = false;
  ++misses_;
  if (misses_ > max_carry_) {
    clear();
    return std::nullopt;
  }
  if (!last_) return std::nullopt;
  for (int& stale : staleness_) ++stale;
  Eigen::VectorXd row = *last_;
  return append(frame_index, std::move(row));
}

Dataset build_dataset(const std::vector<LabeledTrack>& tracks, int window_len, int max_carry) {
  Dataset ds;
  ds.window_len = window_len;
  for (const LabeledTrack& track : tracks) {
    WindowBuffer buffer(track.track_id, window_len, max_carry);
    // Frames backing the buffer's rows, oldest first.
    std::deque<const LabeledFrame*> contributors;
    for (const LabeledFrame& frame : track.frames) {
      std::optional<Window> w = frame.features ? buffer.push(frame.frame_index, *frame.features)
                                               : buffer.push_miss(frame.frame_index);
      if (buffer.last_push_appended()) contributors.push_back(&frame);
      while (contributors.size() > buffer.size()) contributors.pop_front();
      if (!w) continue;

      for (const LabeledFrame* c : contributors) {
        if (!c->label) {
          throw ValidationError("build_dataset: track " + std::to_string(track.track_id) +
                                " frame " + std::to_string(c->frame_index) +
                                " has no label");
        }
      }
      if (ds.feature_dim == 0) ds.feature_dim = static_cast<int>(w->matrix.cols());
      ds.windows.push_back(std::move(w->matrix));
      ds.labels.push_back(*contributors.back()->label);
    }
  }
  return ds;
}

}  // namespace vigil
