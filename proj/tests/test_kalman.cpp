#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "vigil/errors.hpp"
#include "vigil/kalman.hpp"

using namespace vigil;
using KF = KalmanFilter<double>;

TEST_CASE("kalman_init sets zero velocities and a positive diagonal covariance") {
  const KF kf;
  const auto s = kf.initiate({100, 50, 0.5, 200});
  KF::Vector8 expected;
  expected << 100, 50, 0.5, 200, 0, 0, 0, 0;
  CHECK(s.mean == expected);
  for (int r = 0; r < 8; ++r) {
    CHECK(s.covariance(r, r) > 0.0);
    for (int c = 0; c < 8; ++c)
      if (r != c) CHECK(s.covariance(r, c) == 0.0);
  }
  // Position std 2 * h / 20 = 20, velocity std 10 * h / 160 = 12.5.
  CHECK(s.covariance(0, 0) == doctest::Approx(400.0));
  CHECK(s.covariance(4, 4) == doctest::Approx(156.25));
  CHECK_THROWS_AS(kf.initiate({0, 0, 1, 0}), ValidationError);
  CHECK_THROWS_AS(kf.initiate({0, 0, 1, -3}), ValidationError);
}

TEST_CASE("kalman_predict applies one constant-velocity step") {
  const KF kf;
  KF::State s = kf.initiate({0, 0, 1, 100});
  s.mean(4) = 5;
  const auto p = kf.predict(s);
  CHECK(p.mean(0) == 5);
  CHECK(p.mean(1) == 0);
  CHECK(p.mean(2) == 1);
  CHECK(p.mean(3) == 100);

  const auto still = kf.predict(kf.initiate({7, 8, 0.5, 50}));
  CHECK(still.mean.head<4>() == KF::Vector4(7, 8, 0.5, 50));

  KF::State m = kf.initiate({0, 0, 1, 100});
  m.mean(4) = 3;
  m.mean(5) = 4;
  for (int i = 0; i < 10; ++i) m = kf.predict(m);
  CHECK(m.mean(0) == 30);
  CHECK(m.mean(1) == 40);
}

TEST_CASE("kalman_update with zero innovation keeps the position") {
  const KF kf;
  const auto p = kf.predict(kf.initiate({10, 20, 0.5, 80}));
  const auto u = kf.update(p, p.mean.head<4>());
  CHECK(u.mean.head<4>() == p.mean.head<4>());
  CHECK(u.covariance.trace() <= p.covariance.trace());
}

TEST_CASE("noiseless constant-velocity target converges within 10 cycles") {
  const KF kf(1.0 / 20, 1.0 / 160, 0.0);
  KF::Vector4 z(100, 200, 0.5, 150);
  const KF::Vector4 v(4, -3, 0, 0);
  KF::State s = kf.initiate(z);
  double err = 0;
  for (int i = 0; i < 10; ++i) {
    z += v;
    s = kf.update(kf.predict(s), z);
    err = (s.mean.head<2>() - z.head<2>()).norm();
  }
  CHECK(err < 1e-6);
}

TEST_CASE("covariance stays symmetric PSD over random cycles") {
  const KF kf;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-500, 500);
  std::uniform_real_distribution<double> jitter(-15, 15);
  std::uniform_real_distribution<double> height(20, 400);
  std::uniform_real_distribution<double> aspect(0.2, 1.5);
  std::bernoulli_distribution skip(0.2);

  KF::State s = kf.initiate({pos(rng), pos(rng), aspect(rng), height(rng)});
  double worst_eig = 0, worst_asym = 0;
  bool trace_ok = true;
  for (int cycle = 0; cycle < 10000; ++cycle) {
    if (cycle % 100 == 0) s = kf.initiate({pos(rng), pos(rng), aspect(rng), height(rng)});
    s = kf.predict(s);
    if (!skip(rng)) {
      const KF::Vector4 z(s.mean(0) + jitter(rng), s.mean(1) + jitter(rng), aspect(rng),
                          std::max(5.0, s.mean(3) + jitter(rng)));
      const double before = s.covariance.trace();
      s = kf.update(s, z);
      trace_ok = trace_ok && s.covariance.trace() <= before * (1 + 1e-12);
    }
    worst_asym = std::max(worst_asym, (s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<KF::Matrix8> es(s.covariance, Eigen::EigenvaluesOnly);
    worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
    REQUIRE(s.mean(3) > 0);
  }
  CHECK(worst_asym == 0.0);
  CHECK(worst_eig >= -1e-9);
  CHECK(trace_ok);
}

TEST_CASE("kalman works in single precision") {
  const KalmanFilter<float> kf;
  auto s = kf.initiate({10.f, 10.f, 0.5f, 100.f});
  s = kf.update(kf.predict(s), {12.f, 11.f, 0.5f, 101.f});
  CHECK(s.mean(0) > 10.f);
  CHECK(s.mean(0) < 12.f);
}
