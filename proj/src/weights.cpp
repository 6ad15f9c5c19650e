#include "vigil/weights.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "vigil/errors.hpp"
#include "vigil/rng.hpp"

namespace vigil {

using detail::json;
using detail::ordered_json;

namespace {

const char* kDirections[2] = {"fw", "bw"};

std::string lstm_name(int layer, int dir, const char* part) {
  return "lstm." + std::to_string(layer + 1) + "." + kDirections[dir] + "." + part;
}

std::string shape_string(const std::vector<Eigen::Index>& shape) {
  std::string s;
  for (auto d : shape) s += "[" + std::to_string(d) + "]";
  return s;
}

/// Flattened nested array with its rectangular shape.
struct RawTensor {
  std::vector<Eigen::Index> shape;
  std::vector<double> data;
};

void flatten(const json& node, const std::string& name, std::size_t depth,
             RawTensor& out) {
  if (node.is_array()) {
    const auto n = static_cast<Eigen::Index>(node.size());
    if (depth == out.shape.size()) {
      out.shape.push_back(n);
    } else if (depth > out.shape.size() || out.shape[depth] != n) {
      throw SchemaError("tensor '" + name + "' is not rectangular");
    }
    for (const json& child : node) flatten(child, name, depth + 1, out);
    return;
  }
  if (depth != out.shape.size()) {
    throw SchemaError("tensor '" + name + "' is not rectangular");
  }
  if (!node.is_number()) {
    throw SchemaError("tensor '" + name + "' contains a non-numeric value");
  }
  const double v = node.get<double>();
  if (!std::isfinite(v)) {
    throw ValidationError("tensor '" + name + "' contains a non-finite value");
  }
  out.data.push_back(v);
}

RawTensor read_tensor(const json& tensors, const std::string& name) {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw SchemaError("missing tensor '" + name + "'");
  RawTensor t;
  flatten(*it, name, 0, t);
  if (t.shape.empty()) throw SchemaError("tensor '" + name + "' must be an array");
  return t;
}

MatrixX<double> to_matrix(const RawTensor& t, const std::string& name) {
  if (t.shape.size() != 2) {
    throw ShapeError("tensor '" + name + "' must be 2-dimensional, got " +
                     shape_string(t.shape));
  }
  MatrixX<double> m(t.shape[0], t.shape[1]);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = t.data[r * m.cols() + c];
  return m;
}

VectorX<double> to_vector(const RawTensor& t, const std::string& name) {
  if (t.shape.size() != 1) {
    throw ShapeError("tensor '" + name + "' must be 1-dimensional, got " +
                     shape_string(t.shape));
  }
  return Eigen::Map<const VectorX<double>>(t.data.data(), t.shape[0]);
}

void expect_shape(const std::string& name, std::vector<Eigen::Index> actual,
                  std::vector<Eigen::Index> expected, const std::string& reference) {
  if (actual != expected) {
    throw ShapeError("dimension mismatch: '" + name + "' is " + shape_string(actual) +
                     " but '" + reference + "' requires " + shape_string(expected));
  }
}

std::vector<Eigen::Index> shape_of(const MatrixX<double>& m) { return {m.rows(), m.cols()}; }
std::vector<Eigen::Index> shape_of(const VectorX<double>& v) { return {v.size()}; }

ordered_json matrix_json(const MatrixX<double>& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json vector_json(const VectorX<double>& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

std::vector<std::string> tensor_names() {
  std::vector<std::string> names = {"conv.kernel", "conv.bias"};
  for (int l = 0; l < kNumBiLstmLayers; ++l) {
    for (int d = 0; d < 2; ++d) {
      names.push_back(lstm_name(l, d, "W"));
      names.push_back(lstm_name(l, d, "U"));
      names.push_back(lstm_name(l, d, "b"));
    }
  }
  names.push_back("dense.W");
  names.push_back("dense.b");
  return names;
}

void check_consistency(const ModelWeights& w) {
  const Eigen::Index F = w.meta.filters;
  const Eigen::Index D = w.meta.feature_dim;
  const Eigen::Index H = w.meta.hidden;
  if (w.meta.window_len <= 0 || F <= 0 || D <= 0 || H <= 0) {
    throw ShapeError("meta: window_len, feature_dim, filters and hidden must be positive");
  }
  const Eigen::Index K = w.conv.kernel_size();
  if (K <= 0 || K % 2 == 0) {
    throw ShapeError("'conv.kernel' must have an odd, positive kernel size, got " +
                     std::to_string(K));
  }
  for (const auto& tap : w.conv.taps) {
    expect_shape("conv.kernel", {tap.rows(), tap.cols()}, {F, D}, "meta.filters/feature_dim");
  }
  expect_shape("conv.bias", shape_of(w.conv.bias), {F}, "conv.kernel");

  for (int l = 0; l < kNumBiLstmLayers; ++l) {
    const Eigen::Index in = l == 0 ? F : 2 * H;
    const std::string in_ref = l == 0 ? "conv.kernel" : lstm_name(l - 1, 0, "U");
    for (int d = 0; d < 2; ++d) {
      const auto& p = d == 0 ? w.lstm[l].fw : w.lstm[l].bw;
      expect_shape(lstm_name(l, d, "U"), shape_of(p.U), {4 * H, H}, "meta.hidden");
      expect_shape(lstm_name(l, d, "W"), shape_of(p.W), {4 * H, in}, in_ref);
      expect_shape(lstm_name(l, d, "b"), shape_of(p.b), {4 * H}, lstm_name(l, d, "U"));
    }
  }
  const std::string last_u = lstm_name(kNumBiLstmLayers - 1, 0, "U");
  expect_shape("dense.W", shape_of(w.dense.W), {3, 2 * H}, last_u);
  expect_shape("dense.b", shape_of(w.dense.b), {3}, "dense.W");
}

ModelWeights load_weights(std::string_view document) {
  const json doc = detail::parse_json(document);
  if (!doc.is_object()) throw SchemaError("weights: expected a JSON object");
  const json& meta = detail::require(doc, "meta", "weights");
  const json& tensors = detail::require(doc, "tensors", "weights");
  if (!tensors.is_object()) throw SchemaError("weights.tensors: expected an object");

  ModelWeights w;
  auto meta_int = [&](const char* key) {
    return static_cast<int>(
        detail::as_integer(detail::require(meta, key, "weights.meta"), key));
  };
  w.meta.window_len = meta_int("window_len");
  w.meta.feature_dim = meta_int("feature_dim");
  w.meta.filters = meta_int("filters");
  w.meta.hidden = meta_int("hidden");
  if (auto it = meta.find("notes"); it != meta.end()) {
    if (!it->is_string()) throw SchemaError("weights.meta.notes: expected a string");
    w.meta.notes = it->get<std::string>();
  }

  // Read everything first so a missing tensor is reported before any shape issue.
  std::vector<RawTensor> raw;
  const auto names = tensor_names();
  for (const auto& name : names) raw.push_back(read_tensor(tensors, name));

  const RawTensor& kernel = raw[0];
  if (kernel.shape.size() != 3) {
    throw ShapeError("tensor 'conv.kernel' must be 3-dimensional [F][D][K], got " +
                     shape_string(kernel.shape));
  }
  const Eigen::Index F = kernel.shape[0], D = kernel.shape[1], K = kernel.shape[2];
  w.conv.taps.assign(static_cast<std::size_t>(K), MatrixX<double>(F, D));
  for (Eigen::Index f = 0; f < F; ++f)
    for (Eigen::Index d = 0; d < D; ++d)
      for (Eigen::Index k = 0; k < K; ++k)
        w.conv.taps[static_cast<std::size_t>(k)](f, d) = kernel.data[(f * D + d) * K + k];
  w.conv.bias = to_vector(raw[1], names[1]);

  std::size_t idx = 2;
  for (int l = 0; l < kNumBiLstmLayers; ++l) {
    for (int d = 0; d < 2; ++d) {
      auto& p = d == 0 ? w.lstm[l].fw : w.lstm[l].bw;
      p.W = to_matrix(raw[idx], names[idx]);
      p.U = to_matrix(raw[idx + 1], names[idx + 1]);
      p.b = to_vector(raw[idx + 2], names[idx + 2]);
      idx += 3;
    }
  }
  w.dense.W = to_matrix(raw[idx], names[idx]);
  w.dense.b = to_vector(raw[idx + 1], names[idx + 1]);

  check_consistency(w);
  return w;
}

ModelWeights load_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open weight file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_weights(ss.str());
}

std::string serialize_weights(const ModelWeights& w) {
  ordered_json doc;
  doc["meta"] = {{"window_len", w.meta.window_len},
                 {"feature_dim", w.meta.feature_dim},
                 {"filters", w.meta.filters},
                 {"hidden", w.meta.hidden},
                 {"notes", w.meta.notes}};

  ordered_json tensors = ordered_json::object();
  ordered_json kernel = ordered_json::array();
  const Eigen::Index K = w.conv.kernel_size();
  const Eigen::Index F = K > 0 ? w.conv.taps[0].rows() : 0;
  const Eigen::Index D = K > 0 ? w.conv.taps[0].cols() : 0;
  for (Eigen::Index f = 0; f < F; ++f) {
    ordered_json per_filter = ordered_json::array();
    for (Eigen::Index d = 0; d < D; ++d) {
      ordered_json taps = ordered_json::array();
      for (Eigen::Index k = 0; k < K; ++k) taps.push_back(w.conv.taps[k](f, d));
      per_filter.push_back(std::move(taps));
    }
    kernel.push_back(std::move(per_filter));
  }
  tensors["conv.kernel"] = std::move(kernel);
  tensors["conv.bias"] = vector_json(w.conv.bias);
  for (int l = 0; l < kNumBiLstmLayers; ++l) {
    for (int d = 0; d < 2; ++d) {
      const auto& p = d == 0 ? w.lstm[l].fw : w.lstm[l].bw;
      tensors[lstm_name(l, d, "W")] = matrix_json(p.W);
      tensors[lstm_name(l, d, "U")] = matrix_json(p.U);
      tensors[lstm_name(l, d, "b")] = vector_json(p.b);
    }
  }
  tensors["dense.W"] = matrix_json(w.dense.W);
  tensors["dense.b"] = vector_json(w.dense.b);
  doc["tensors"] = std::move(tensors);
  return doc.dump() + "\n";
}

ModelWeights init_test_weights(std::uint64_t seed, const ModelDims& dims) {
  if (dims.window_len <= 0 || dims.feature_dim <= 0 || dims.filters <= 0 ||
      dims.hidden <= 0 || dims.kernel_size <= 0 || dims.kernel_size % 2 == 0) {
    throw ValidationError("init_test_weights: dims must be positive, kernel size odd");
  }
  SplitMix64 rng(seed);
  auto draw = [&rng] { return rng.uniform() - 0.5; };
  auto fill_matrix = [&](Eigen::Index rows, Eigen::Index cols) {
    MatrixX<double> m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = draw();
    return m;
  };
  auto fill_vector = [&](Eigen::Index n) {
    VectorX<double> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = draw();
    return v;
  };

  const Eigen::Index F = dims.filters, D = dims.feature_dim, K = dims.kernel_size;
  const Eigen::Index H = dims.hidden;
  ModelWeights w;
  w.meta = {dims.window_len, dims.feature_dim, dims.filters, dims.hidden,
            "fixture: init_test_weights seed=" + std::to_string(seed) +
                " splitmix64 uniform[-0.5,0.5)"};
  w.conv.taps.assign(static_cast<std::size_t>(K), MatrixX<double>(F, D));
  for (Eigen::Index f = 0; f < F; ++f)
    for (Eigen::Index d = 0; d < D; ++d)
      for (Eigen::Index k = 0; k < K; ++k) w.conv.taps[k](f, d) = draw();
  w.conv.bias = fill_vector(F);
  for (int l = 0; l < kNumBiLstmLayers; ++l) {
    const Eigen::Index in = l == 0 ? F : 2 * H;
    for (auto* p : {&w.lstm[l].fw, &w.lstm[l].bw}) {
      p->W = fill_matrix(4 * H, in);
      p->U = fill_matrix(4 * H, H);
      p->b = fill_vector(4 * H);
    }
  }
  w.dense.W = fill_matrix(3, 2 * H);
  w.dense.b = fill_vector(3);
  return w;
}

}  // namespace vigil
