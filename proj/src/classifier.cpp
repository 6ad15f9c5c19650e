#include "vigil/classifier.hpp"

#include <string>

#include "vigil/errors.hpp"
#include "vigil/nn.hpp"

namespace vigil {

ClassScores model_forward(const Eigen::MatrixXd& window, const ModelWeights& w) {
  if (window.rows() != w.meta.window_len || window.cols() != w.meta.feature_dim) {
    throw ShapeError("window shape [" + std::to_string(window.rows()) + "][" +
                     std::to_string(window.cols()) + "] does not match weights [" +
                     std::to_string(w.meta.window_len) + "][" +
                     std::to_string(w.meta.feature_dim) + "]");
  }
  Eigen::MatrixXd x = nn::conv1d_forward(window, w.conv);
  for (int l = 0; l < kNumBiLstmLayers - 1; ++l) {
    x = nn::bilstm_layer_forward(x, w.lstm[l], true);
  }
  const Eigen::MatrixXd last = nn::bilstm_layer_forward(x, w.lstm.back(), false);
  const Eigen::VectorXd probs = nn::dense_softmax(last.row(0).transpose(), w.dense);

  ClassScores s;
  for (std::size_t c = 0; c < kNumClasses; ++c) s.probs[c] = probs(static_cast<Eigen::Index>(c));
  return s;
}

Label argmax_label(const ClassScores& scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (scores.probs[c] > scores.probs[best]) best = c;
  }
  return kAllLabels[best];
}

}  // namespace vigil
