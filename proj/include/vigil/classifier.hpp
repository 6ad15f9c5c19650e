#pragma once

#include <array>

#include <Eigen/Core>

#include "vigil/types.hpp"
#include "vigil/weights.hpp"

namespace vigil {

/// Class probabilities in Label order (neutral, aggressor, victim).
struct ClassScores {
  std::array<double, kNumClasses> probs{};

  double operator[](Label l) const { return probs[static_cast<std::size_t>(l)]; }
  friend bool operator==(const ClassScores&, const ClassScores&) = default;
};

/// conv1d -> BiLSTM x4 (sequences) -> BiLSTM (final state) -> dense softmax.
/// Dropout is the identity at inference. Throws ShapeError if the window is
/// not window_len x feature_dim of the weights.
ClassScores model_forward(const Eigen::MatrixXd& window, const ModelWeights& weights);

/// Highest probability; exact ties go to the earlier class in Label order.
Label argmax_label(const ClassScores& scores);

}  // namespace vigil
