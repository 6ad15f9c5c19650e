#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace vigil {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Exact equality that tolerates differing shapes.
template <typename A, typename B>
bool same_tensor(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

/// One LSTM direction. Gate blocks are stacked i, f, g, o along the rows.
template <typename Scalar>
struct LstmParams {
  MatrixX<Scalar> W;  // [4H][in]
  MatrixX<Scalar> U;  // [4H][H]
  VectorX<Scalar> b;  // [4H]

  Eigen::Index hidden() const { return U.cols(); }
  Eigen::Index input_size() const { return W.cols(); }
  bool operator==(const LstmParams& o) const {
    return same_tensor(W, o.W) && same_tensor(U, o.U) && same_tensor(b, o.b);
  }
};

template <typename Scalar>
struct BiLstmParams {
  LstmParams<Scalar> fw;
  LstmParams<Scalar> bw;
  bool operator==(const BiLstmParams&) const = default;
};

/// Temporal convolution. taps[k] is the F x D slice of the [F][D][K] kernel
/// applied to input row t + k - K/2.
template <typename Scalar>
struct ConvParams {
  std::vector<MatrixX<Scalar>> taps;
  VectorX<Scalar> bias;

  Eigen::Index kernel_size() const { return static_cast<Eigen::Index>(taps.size()); }
  bool operator==(const ConvParams& o) const {
    if (taps.size() != o.taps.size() || !same_tensor(bias, o.bias)) return false;
    for (std::size_t k = 0; k < taps.size(); ++k) {
      if (!same_tensor(taps[k], o.taps[k])) return false;
    }
    return true;
  }
};

template <typename Scalar>
struct DenseParams {
  MatrixX<Scalar> W;  // [3][2H]
  VectorX<Scalar> b;  // [3]
  bool operator==(const DenseParams& o) const { return same_tensor(W, o.W) && same_tensor(b, o.b); }
};

struct WeightsMeta {
  int window_len = 10;
  int feature_dim = 24;
  int filters = 64;
  int hidden = 32;
  std::string notes;
  bool operator==(const WeightsMeta&) const = default;
};

inline constexpr int kNumBiLstmLayers = 5;

template <typename Scalar>
struct ModelWeightsT {
  WeightsMeta meta;
  ConvParams<Scalar> conv;
  std::array<BiLstmParams<Scalar>, kNumBiLstmLayers> lstm;
  DenseParams<Scalar> dense;

  bool operator==(const ModelWeightsT&) const = default;
};

using ModelWeights = ModelWeightsT<double>;

/// Architecture sizes for fixture generation.
struct ModelDims {
  int window_len = 10;
  int feature_dim = 24;
  int filters = 64;
  int hidden = 32;
  int kernel_size = 3;
};

/// Names of every tensor a weight file must contain, in file order.
std::vector<std::string> tensor_names();

/// Parses and dimension-checks a weight document. Throws ParseError,
/// SchemaError (missing tensor or meta key), ShapeError (dimension mismatch,
/// naming both tensors) or ValidationError (non-finite value).
ModelWeights load_weights(std::string_view document);
ModelWeights load_weights_file(const std::string& path);

/// Writes the weight document. Doubles are printed in shortest round-trip
/// form, so load_weights(serialize_weights(w)) == w bit for bit.
std::string serialize_weights(const ModelWeights& weights);

/// Throws ShapeError if tensors disagree with each other or with meta.
void check_consistency(const ModelWeights& weights);

/// Deterministic fixture weights. Tensors are filled in tensor_names() order,
/// each in row-major order of its file layout ([F][D][K] for conv.kernel),
/// with SplitMix64(seed).uniform() - 0.5.
ModelWeights init_test_weights(std::uint64_t seed, const ModelDims& dims);

}  // namespace vigil
