#include "lidartrack/kalman.hpp"

#include <cmath>
#include <stdexcept>

#include "lidartrack/errors.hpp"

namespace lidartrack {
namespace {

int derivative_count(MotionModel model) {
  switch (model) {
    case MotionModel::kStatic:
      return 1;
    case MotionModel::kConstantVelocity:
      return 2;
    case MotionModel::kConstantAcceleration:
      return 3;
  }
  return 2;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

int state_dim(MotionModel model) { return 2 * derivative_count(model); }

KalmanState KalmanState::at_position(MotionModel model, double x, double y, double pos_std,
                                     double vel_std, double acc_std) {
  const int n = state_dim(model);
  KalmanState k;
  k.model = model;
  k.mean = Eigen::VectorXd::Zero(n);
  k.mean(0) = x;
  k.mean(1) = y;
  k.covariance = Eigen::MatrixXd::Zero(n, n);
  const double stds[3] = {pos_std, vel_std, acc_std};
  for (int i = 0; i < n; ++i) {
    k.covariance(i, i) = stds[i / 2] * stds[i / 2];
  }
  return k;
}

Eigen::MatrixXd transition_matrix(MotionModel model, double dt) {
  const int d = derivative_count(model);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  for (int axis = 0; axis < 2; ++axis) {
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        f(2 * i + axis, 2 * j + axis) = std::pow(dt, j - i) / factorial(j - i);
      }
    }
  }
  return f;
}

Eigen::MatrixXd process_noise(MotionModel model, double dt, double q_accel) {
  const int d = derivative_count(model);
  Eigen::VectorXd g(d);
  for (int i = 0; i < d; ++i) {
    g(i) = std::pow(dt, 2 - i) / factorial(2 - i);
  }
  const Eigen::MatrixXd block = q_accel * q_accel * g * g.transpose();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  for (int axis = 0; axis < 2; ++axis) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        q(2 * i + axis, 2 * j + axis) = block(i, j);
      }
    }
  }
  return q;
}

KalmanState kalman_predict(const KalmanState& k, double dt, double q_accel) {
  if (!(dt >= 0.0)) {
    throw std::invalid_argument("kalman_predict: dt must be non-negative");
  }
  const Eigen::MatrixXd f = transition_matrix(k.model, dt);
  KalmanState out = k;
  out.mean = f * k.mean;
  out.covariance = f * k.covariance * f.transpose() + process_noise(k.model, dt, q_accel);
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

KalmanState kalman_update(const KalmanState& k, double zx, double zy, double r_pos) {
  if (!std::isfinite(zx) || !std::isfinite(zy)) {
    throw std::invalid_argument("kalman_update: measurement must be finite");
  }
  const auto n = k.mean.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, n);
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  const Eigen::Matrix2d r = Eigen::Matrix2d::Identity() * (r_pos * r_pos);

  const Eigen::Matrix2d s = h * k.covariance * h.transpose() + r;
  const Eigen::LLT<Eigen::Matrix2d> llt(s);
  if (llt.info() != Eigen::Success || !(s.determinant() > 0.0)) {
    throw NumericalError("kalman_update: innovation covariance is not positive definite");
  }
  // K = P H^T S^-1, solved as S K^T = H P.
  const Eigen::MatrixXd gain = llt.solve(h * k.covariance).transpose();
  const Eigen::Vector2d innovation(zx - k.mean(0), zy - k.mean(1));

  KalmanState out = k;
  out.mean = k.mean + gain * innovation;
  const Eigen::MatrixXd i_kh = Eigen::MatrixXd::Identity(n, n) - gain * h;
  out.covariance = i_kh * k.covariance * i_kh.transpose() + gain * r * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

}  // namespace lidartrack
