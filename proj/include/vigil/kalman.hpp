#pragma once

#include <algorithm>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "vigil/errors.hpp"

namespace vigil {

/// Constant-velocity box filter over (cx, cy, a, h, vcx, vcy, va, vh).
///
/// Noise scales with box height h: the position/aspect/height process and
/// observation std is std_weight_position * h, velocity process std is
/// std_weight_velocity * h. The aspect ratio uses fixed small stds
/// (1e-2 process, 1e-5 velocity, 1e-1 observation).
template <typename Scalar = double>
class KalmanFilter {
 public:
  using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
  using Vector8 = Eigen::Matrix<Scalar, 8, 1>;
  using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
  using Matrix8 = Eigen::Matrix<Scalar, 8, 8>;
  using Matrix48 = Eigen::Matrix<Scalar, 4, 8>;

  struct State {
    Vector8 mean;
    Matrix8 covariance;
  };

  static constexpr Scalar kMinHeight = Scalar(1e-4);

  explicit KalmanFilter(Scalar std_weight_position = Scalar(1) / 20,
                        Scalar std_weight_velocity = Scalar(1) / 160,
                        Scalar measurement_noise_scale = Scalar(1))
      : std_pos_(std_weight_position),
        std_vel_(std_weight_velocity),
        meas_scale_(measurement_noise_scale) {
    transition_.setIdentity();
    for (int i = 0; i < 4; ++i) transition_(i, 4 + i) = Scalar(1);
    observation_.setZero();
    for (int i = 0; i < 4; ++i) observation_(i, i) = Scalar(1);
  }

  State initiate(const Vector4& z) const {
    const Scalar h = z(3);
    if (!(h > Scalar(0))) throw ValidationError("kalman_init: height must be positive");
    State s;
    s.mean << z, Vector4::Zero();
    Vector8 std;
    std << 2 * std_pos_ * h, 2 * std_pos_ * h, Scalar(1e-2), 2 * std_pos_ * h,
        10 * std_vel_ * h, 10 * std_vel_ * h, Scalar(1e-5), 10 * std_vel_ * h;
    s.covariance = std.array().square().matrix().asDiagonal();
    return s;
  }

  State predict(const State& s) const {
    const Scalar h = s.mean(3);
    Vector8 std;
    std << std_pos_ * h, std_pos_ * h, Scalar(1e-2), std_pos_ * h, std_vel_ * h,
        std_vel_ * h, Scalar(1e-5), std_vel_ * h;
    const Matrix8 q = std.array().square().matrix().asDiagonal();
    State out;
    out.mean = transition_ * s.mean;
    out.covariance = transition_ * s.covariance * transition_.transpose() + q;
    symmetrize(out.covariance);
    out.mean(3) = std::max(out.mean(3), kMinHeight);
    return out;
  }

  /// Projects the state into measurement space: (mean, innovation covariance).
  std::pair<Vector4, Matrix4> project(const State& s) const {
    return {observation_ * s.mean,
            observation_ * s.covariance * observation_.transpose() + measurement_noise(s)};
  }

  /// Kalman correction in Joseph form. Throws Error if the innovation
  /// covariance is not positive definite.
  State update(const State& s, const Vector4& z) const {
    if (!(z(3) > Scalar(0))) throw ValidationError("kalman_update: height must be positive");
    const Matrix4 r = measurement_noise(s);
    const Matrix4 innovation_cov =
        observation_ * s.covariance * observation_.transpose() + r;
    Eigen::LLT<Matrix4> llt(innovation_cov);
    if (llt.info() != Eigen::Success) {
      throw Error("kalman_update: singular innovation covariance");
    }
    // gain = P H^T S^-1, computed as (S^-1 H P)^T since S and P are symmetric.
    const Eigen::Matrix<Scalar, 8, 4> gain =
        llt.solve(observation_ * s.covariance).transpose();
    const Vector4 innovation = z - observation_ * s.mean;

    State out;
    out.mean = s.mean + gain * innovation;
    const Matrix8 ikh = Matrix8::Identity() - gain * observation_;
    out.covariance =
        ikh * s.covariance * ikh.transpose() + gain * r * gain.transpose();
    symmetrize(out.covariance);
    out.mean(3) = std::max(out.mean(3), kMinHeight);
    return out;
  }

 private:
  Matrix4 measurement_noise(const State& s) const {
    const Scalar h = s.mean(3);
    Vector4 std;
    std << std_pos_ * h, std_pos_ * h, Scalar(1e-1), std_pos_ * h;
    return (meas_scale_ * std).array().square().matrix().asDiagonal();
  }

  static void symmetrize(Matrix8& m) { m = (Scalar(0.5) * (m + m.transpose())).eval(); }

  Scalar std_pos_;
  Scalar std_vel_;
  Scalar meas_scale_;
  Matrix8 transition_;
  Matrix48 observation_;
};

}  // namespace vigil
