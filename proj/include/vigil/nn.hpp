#pragma once

// Inference kernels for the CNN-BiLSTM classifier. Activations are time-major
// (one row per time step). All kernels are templated on the scalar type.

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "vigil/errors.hpp"
#include "vigil/weights.hpp"

namespace vigil::nn {

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

/// Same-padded temporal convolution followed by ReLU:
///   out[t][f] = relu(bias[f] + sum_{d,k} in[t + k - K/2][d] * kernel[f][d][k])
template <typename Derived>
MatrixX<typename Derived::Scalar> conv1d_forward(
    const Eigen::MatrixBase<Derived>& input, const ConvParams<typename Derived::Scalar>& conv) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index T = input.rows();
  const Eigen::Index K = conv.kernel_size();
  const Eigen::Index F = conv.bias.size();
  if (K == 0 || K % 2 == 0) throw ShapeError("conv1d: kernel size must be odd");
  for (const auto& tap : conv.taps) {
    if (tap.rows() != F || tap.cols() != input.cols()) {
      throw ShapeError("conv1d: kernel is [" + std::to_string(tap.rows()) + "][" +
                       std::to_string(tap.cols()) + "] but input has " +
                       std::to_string(input.cols()) + " features and bias " +
                       std::to_string(F) + " filters");
    }
  }

  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(T, F);
  const Eigen::Index half = K / 2;
  for (Eigen::Index k = 0; k < K; ++k) {
    const Eigen::Index offset = k - half;
    // Output rows t with 0 <= t + offset < T.
    const Eigen::Index first = std::max<Eigen::Index>(0, -offset);
    const Eigen::Index last = std::min<Eigen::Index>(T, T - offset);
    if (last <= first) continue;
    out.middleRows(first, last - first).noalias() +=
        input.middleRows(first + offset, last - first) * conv.taps[k].transpose();
  }
  out.rowwise() += conv.bias.transpose();
  return out.cwiseMax(Scalar(0));
}

/// One LSTM step with gates stacked i, f, g, o. Returns (h, c).
template <typename X, typename Hd, typename Cd>
std::pair<VectorX<typename X::Scalar>, VectorX<typename X::Scalar>> lstm_cell_step(
    const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Hd>& h_prev,
    const Eigen::MatrixBase<Cd>& c_prev, const LstmParams<typename X::Scalar>& p) {
  using Scalar = typename X::Scalar;
  const Eigen::Index H = p.hidden();
  const VectorX<Scalar> gates = p.W * x + p.U * h_prev + p.b;
  const auto sig = [](Scalar v) { return sigmoid(v); };
  const auto tanh = [](Scalar v) { return std::tanh(v); };
  const VectorX<Scalar> i = gates.segment(0, H).unaryExpr(sig);
  const VectorX<Scalar> f = gates.segment(H, H).unaryExpr(sig);
  const VectorX<Scalar> g = gates.segment(2 * H, H).unaryExpr(tanh);
  const VectorX<Scalar> o = gates.segment(3 * H, H).unaryExpr(sig);
  VectorX<Scalar> c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
  VectorX<Scalar> h = o.cwiseProduct(c.unaryExpr(tanh));
  return {std::move(h), std::move(c)};
}

/// Runs one direction over `input` (rows in processing order) and writes
/// h_t into out.row(t).
template <typename Derived, typename Out>
void lstm_sequence(const Eigen::MatrixBase<Derived>& input,
                   const LstmParams<typename Derived::Scalar>& p, Eigen::MatrixBase<Out>& out) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index T = input.rows();
  const Eigen::Index H = p.hidden();
  // Input projections for every step at once.
  MatrixX<Scalar> projected = input * p.W.transpose();
  projected.rowwise() += p.b.transpose();

  VectorX<Scalar> h = VectorX<Scalar>::Zero(H);
  VectorX<Scalar> c = VectorX<Scalar>::Zero(H);
  VectorX<Scalar> gates(4 * H);
  for (Eigen::Index t = 0; t < T; ++t) {
    gates.noalias() = projected.row(t).transpose();
    gates.noalias() += p.U * h;
    for (Eigen::Index j = 0; j < H; ++j) {
      const Scalar ig = sigmoid(gates(j));
      const Scalar fg = sigmoid(gates(H + j));
      const Scalar gg = std::tanh(gates(2 * H + j));
      const Scalar og = sigmoid(gates(3 * H + j));
      c(j) = fg * c(j) + ig * gg;
      h(j) = og * std::tanh(c(j));
    }
    out.row(t) = h.transpose();
  }
}

/// Bidirectional LSTM layer. With return_sequences the result is T x 2H,
/// row t = [h_fw(t) | h_bw(t)]. Otherwise it is 1 x 2H: the final state of
/// each direction, [h_fw(T-1) | h_bw(0)].
template <typename Derived>
MatrixX<typename Derived::Scalar> bilstm_layer_forward(
    const Eigen::MatrixBase<Derived>& input, const BiLstmParams<typename Derived::Scalar>& p,
    bool return_sequences) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index T = input.rows();
  const Eigen::Index H = p.fw.hidden();
  if (p.fw.input_size() != input.cols() || p.bw.input_size() != input.cols() ||
      p.bw.hidden() != H) {
    throw ShapeError("bilstm: layer expects " + std::to_string(p.fw.input_size()) +
                     " inputs, got " + std::to_string(input.cols()));
  }

  MatrixX<Scalar> fw(T, H);
  lstm_sequence(input, p.fw, fw);
  MatrixX<Scalar> bw_reversed(T, H);
  const MatrixX<Scalar> reversed = input.colwise().reverse();
  lstm_sequence(reversed, p.bw, bw_reversed);

  if (!return_sequences) {
    if (T == 0) return MatrixX<Scalar>::Zero(1, 2 * H);
    MatrixX<Scalar> out(1, 2 * H);
    out << fw.row(T - 1), bw_reversed.row(T - 1);
    return out;
  }
  MatrixX<Scalar> out(T, 2 * H);
  out.leftCols(H) = fw;
  out.rightCols(H) = bw_reversed.colwise().reverse();
  return out;
}

template <typename Derived>
VectorX<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  const Scalar shift = logits.maxCoeff();
  VectorX<Scalar> e = (logits.array() - shift).exp().matrix();
  return e / e.sum();
}

/// logits = W h + b, then a max-shifted softmax.
template <typename Derived>
VectorX<typename Derived::Scalar> dense_softmax(const Eigen::MatrixBase<Derived>& h,
                                                const DenseParams<typename Derived::Scalar>& p) {
  using Scalar = typename Derived::Scalar;
  if (p.W.cols() != h.size()) {
    throw ShapeError("dense: expects " + std::to_string(p.W.cols()) + " inputs, got " +
                     std::to_string(h.size()));
  }
  const VectorX<Scalar> logits = p.W * h + p.b;
  return softmax(logits);
}

}  // namespace vigil::nn
