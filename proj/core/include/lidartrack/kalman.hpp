#pragma once

#include <Eigen/Dense>

namespace lidartrack {

/// Motion models selectable for the tracker's prediction step. The state
/// stacks derivatives per axis: [x, y], [x, y, vx, vy] or
/// [x, y, vx, vy, ax, ay].
enum class MotionModel { kStatic, kConstantVelocity, kConstantAcceleration };

int state_dim(MotionModel model);

/// Planar Kalman state in the city frame. z and the box dimensions ride
/// along from the latest associated detection and are not filtered.
struct KalmanState {
  MotionModel model = MotionModel::kConstantVelocity;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  Eigen::MatrixXd covariance = Eigen::MatrixXd::Zero(4, 4);
  double z = 0.0;
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;

  double x() const { return mean(0); }
  double y() const { return mean(1); }
  double vx() const { return mean.size() >= 4 ? mean(2) : 0.0; }
  double vy() const { return mean.size() >= 4 ? mean(3) : 0.0; }

  /// New state at (x, y) with zero higher derivatives. Position variance is
  /// pos_std^2, velocity variance vel_std^2, acceleration variance acc_std^2.
  static KalmanState at_position(MotionModel model, double x, double y, double pos_std,
                                 double vel_std, double acc_std = 0.0);
};

/// State transition F for time step dt.
Eigen::MatrixXd transition_matrix(MotionModel model, double dt);

/// Process noise Q = q^2 * G * G^T per axis with G_d = dt^(2-d) / (2-d)! for
/// derivative order d (piecewise-constant white acceleration for the
/// constant-velocity model). Zero at dt = 0.
Eigen::MatrixXd process_noise(MotionModel model, double dt, double q_accel);

/// mean' = F mean, P' = F P F^T + Q. Throws std::invalid_argument for dt < 0.
KalmanState kalman_predict(const KalmanState& k, double dt, double q_accel);

/// Position measurement update with R = r_pos^2 I. Joseph-form covariance,
/// symmetrized. Throws NumericalError if the innovation covariance is not
/// positive definite, std::invalid_argument on a non-finite measurement.
KalmanState kalman_update(const KalmanState& k, double zx, double zy, double r_pos);

}  // namespace lidartrack
