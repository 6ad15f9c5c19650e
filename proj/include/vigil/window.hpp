#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "vigil/features.hpp"
#include "vigil/types.hpp"

namespace vigil {

/// T consecutive processed frames of one track, one feature vector per row.
struct Window {
  std::int64_t track_id = 0;
  std::int64_t end_frame_index = 0;
  Eigen::MatrixXd matrix;
};

/// Per-track sliding window with stride 1.
///
/// A miss repeats the last row for at most `max_carry` consecutive frames;
/// one more miss clears the buffer. Unobserved entries of a pushed vector
/// take the previous row's value while that value is at most `max_carry`
/// frames stale, and 0 otherwise.
class WindowBuffer {
 public:
  WindowBuffer(std::int64_t track_id, int window_len, int max_carry = 3);

  /// Invalid vectors count as misses.
  std::optional<Window> push(std::int64_t frame_index, const FeatureVector& fv);
  std::optional<Window> push_miss(std::int64_t frame_index);

  std::size_t size() const { return rows_.size(); }
  int consecutive_misses() const { return misses_; }
  /// Whether the last push added a row.
  bool last_push_appended() const { return appended_; }
  void clear();

 private:
  std::optional<Window> append(std::int64_t frame_index, Eigen::VectorXd row);

  std::int64_t track_id_;
  int window_len_;
  int max_carry_;
  std::deque<Eigen::VectorXd> rows_;
  std::optional<Eigen::VectorXd> last_;
  std::vector<int> staleness_;
  int misses_ = 0;
  bool appended_ = false;
};

struct LabeledFrame {
  std::int64_t frame_index = 0;
  /// nullopt marks a miss.
  std::optional<FeatureVector> features;
  std::optional<Label> label;
};

struct LabeledTrack {
  std::int64_t track_id = 0;
  std::vector<LabeledFrame> frames;
};

struct Dataset {
  std::vector<Eigen::MatrixXd> windows;
  std::vector<Label> labels;
  int window_len = 0;
  int feature_dim = 0;

  std::array<std::size_t, 3> shape() const {
    return {windows.size(), static_cast<std::size_t>(window_len),
            static_cast<std::size_t>(feature_dim)};
  }
};

/// Windows every track with WindowBuffer semantics; each window takes the
/// label of its last frame. Throws ValidationError naming track and frame if
/// a frame contributing a row has no label.
Dataset build_dataset(const std::vector<LabeledTrack>& tracks, int window_len,
                      int max_carry = 3);

}  // namespace vigil
