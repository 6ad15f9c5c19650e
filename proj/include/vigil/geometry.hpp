#pragma once

#include <algorithm>

#include <Eigen/Core>

#include "vigil/types.hpp"

namespace vigil {

/// Intersection over union of two boxes with positive extent; 0 when disjoint.
inline double iou(const BBox& a, const BBox& b) {
  if (a == b) return 1.0;
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

/// (cx, cy, w/h, h) measurement form used by the Kalman filter.
template <typename Scalar = double>
Eigen::Matrix<Scalar, 4, 1> to_xyah(const BBox& b) {
  return {Scalar(b.x + 0.5 * b.w), Scalar(b.y + 0.5 * b.h), Scalar(b.w / b.h), Scalar(b.h)};
}

/// Inverse of to_xyah. The aspect ratio is clamped to >= min_aspect.
template <typename Derived>
BBox from_xyah(const Eigen::MatrixBase<Derived>& m, double min_aspect = 1e-4) {
  const double a = std::max(static_cast<double>(m(2)), min_aspect);
  const double h = static_cast<double>(m(3));
  const double w = a * h;
  return {static_cast<double>(m(0)) - 0.5 * w, static_cast<double>(m(1)) - 0.5 * h, w, h};
}

}  // namespace vigil
