#include "lidartrack/kalman.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "support/oracles.hpp"

namespace lidartrack {
namespace {

KalmanState cv_state(double x, double y, double vx, double vy, double p) {
  auto k = KalmanState::at_position(MotionModel::kConstantVelocity, x, y, p, p);
  k.mean(2) = vx;
  k.mean(3) = vy;
  return k;
}

TEST(Kalman, StateDimensions) {
  EXPECT_EQ(state_dim(MotionModel::kStatic), 2);
  EXPECT_EQ(state_dim(MotionModel::kConstantVelocity), 4);
  EXPECT_EQ(state_dim(MotionModel::kConstantAcceleration), 6);
}

TEST(Kalman, ZeroStepIsIdentity) {
  const auto k = cv_state(1, 2, 3, 4, 0.7);
  const auto p = kalman_predict(k, 0.0, 2.0);
  EXPECT_EQ(p.mean, k.mean);
  EXPECT_EQ(p.covariance, k.covariance);
  EXPECT_THROW(kalman_predict(k, -0.1, 2.0), std::invalid_argument);
}

TEST(Kalman, ConstantVelocityStep) {
  const auto k = cv_state(0, 0, 1, 0, 1.0);
  const auto p = kalman_predict(k, 1.0, 0.0);
  EXPECT_EQ(p.x(), 1.0);
  EXPECT_EQ(p.y(), 0.0);
  EXPECT_EQ(p.vx(), 1.0);
}

TEST(Kalman, ConstantAccelerationStep) {
  auto k = KalmanState::at_position(MotionModel::kConstantAcceleration, 0, 0, 1, 1, 1);
  k.mean(4) = 2.0;  // ax
  const auto p = kalman_predict(k, 0.5, 0.0);
  EXPECT_DOUBLE_EQ(p.x(), 0.25);  // a t^2 / 2
  EXPECT_DOUBLE_EQ(p.vx(), 1.0);
}

TEST(Kalman, StaticModelOnlyGrowsPosition) {
  const auto k = KalmanState::at_position(MotionModel::kStatic, 3, 4, 1.0, 0.0);
  const auto p = kalman_predict(k, 0.1, 2.0);
  EXPECT_EQ(p.x(), 3.0);
  EXPECT_EQ(p.vx(), 0.0);
  EXPECT_DOUBLE_EQ(p.covariance(0, 0), 1.0 + 4.0 * 0.0001 / 4.0);  // q^2 dt^4 / 4
}

TEST(Kalman, PredictCovarianceMatchesElementwiseOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> dt_dist(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix4d a;
    for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = u(rng);
    const Eigen::Matrix4d p0 = a * a.transpose() + 0.1 * Eigen::Matrix4d::Identity();
    KalmanState k;
    k.covariance = p0;
    const double dt = dt_dist(rng);
    const double q = 0.5 + u(rng) / 2;
    const auto out = kalman_predict(k, dt, q);

    oracle::Mat4 pin{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) pin[i][j] = p0(i, j);
    const auto expected = oracle::cv_predict_covariance(pin, dt, q);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(out.covariance(i, j), expected[i][j], 1e-9);
  }
}

TEST(Kalman, ExactMeasurementPinsPosition) {
  const auto k = cv_state(0, 0, 0, 0, 5.0);
  const auto u = kalman_update(k, 3.0, -2.0, 1e-6);
  EXPECT_NEAR(u.x(), 3.0, 1e-9);
  EXPECT_NEAR(u.y(), -2.0, 1e-9);
  EXPECT_LT(u.covariance(0, 0), 1e-9);
}

TEST(Kalman, MeasurementAtMeanShrinksUncertainty) {
  const auto k = cv_state(1, 1, 0, 0, 2.0);
  const auto u = kalman_update(k, 1.0, 1.0, 0.5);
  EXPECT_EQ(u.x(), 1.0);
  EXPECT_EQ(u.y(), 1.0);
  EXPECT_LT(u.covariance.trace(), k.covariance.trace());
}

TEST(Kalman, ScalarGain) {
  // With independent axes the x-position update is P / (P + R).
  const double p = 4.0;
  const double r = 1.0;
  const auto k = KalmanState::at_position(MotionModel::kStatic, 0, 0, std::sqrt(p), 0.0);
  const auto u = kalman_update(k, 10.0, 0.0, std::sqrt(r));
  EXPECT_NEAR(u.x(), 10.0 * p / (p + r), 1e-12);
  EXPECT_NEAR(u.covariance(0, 0), p * r / (p + r), 1e-12);
}

TEST(Kalman, NonFiniteMeasurementRejected) {
  const auto k = cv_state(0, 0, 0, 0, 1.0);
  EXPECT_THROW(kalman_update(k, std::nan(""), 0.0, 0.5), std::invalid_argument);
}

TEST(Kalman, CovarianceStaysSymmetricPositiveDefinite) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> noise(0.0, 0.5);
  for (auto model : {MotionModel::kStatic, MotionModel::kConstantVelocity, MotionModel::kConstantAcceleration}) {
    auto k = KalmanState::at_position(model, 0, 0, 1.0, 10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
      k = kalman_predict(k, 0.1, 2.0);
      k = kalman_update(k, 0.1 * i + noise(rng), noise(rng), 0.5);
      ASSERT_EQ(k.covariance, k.covariance.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k.covariance);
      ASSERT_GT(eig.eigenvalues().minCoeff(), 0.0) << "cycle " << i;
    }
  }
}

TEST(Kalman, VelocityConverges) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> noise(0.0, 0.05);
  auto k = KalmanState::at_position(MotionModel::kConstantVelocity, 0, 0, 0.5, 10.0);
  for (int i = 1; i <= 50; ++i) {
    k = kalman_predict(k, 0.1, 2.0);
    k = kalman_update(k, 0.8 * i + noise(rng), -0.3 * i + noise(rng), 0.5);
  }
  EXPECT_NEAR(k.vx(), 8.0, 0.4);
  EXPECT_NEAR(k.vy(), -3.0, 0.4);
}

}  // namespace
}  // namespace lidartrack
