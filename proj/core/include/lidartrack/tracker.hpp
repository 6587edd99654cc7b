#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lidartrack/detection.hpp"
#include "lidartrack/hungarian.hpp"
#include "lidartrack/kalman.hpp"

namespace lidartrack {

enum class TrackStatus { kTentative, kConfirmed, kDeleted };

struct TrackerConfig {
  int hit_confirm_threshold = 5;
  int miss_delete_threshold = 5;
  double gate_distance = 4.0;
  double process_noise_accel = 2.0;
  double measurement_noise_pos = 0.5;
  double initial_velocity_std = 10.0;
  MotionModel motion_model = MotionModel::kConstantVelocity;

  void validate() const;
};

struct Track {
  std::int64_t id = 0;
  KalmanState kalman;
  int hits = 1;
  int consecutive_misses = 0;
  TrackStatus status = TrackStatus::kTentative;
};

/// Confirmed track as emitted for one frame.
struct TrackSnapshot {
  std::int64_t id = 0;
  Vec3 center;
  double vx = 0.0;
  double vy = 0.0;
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
  int hits = 0;
  int consecutive_misses = 0;
};

/// BEV centroid distance between each track's (predicted) position and each
/// detection center. Entries beyond `gate` become kForbiddenCost.
Eigen::MatrixXd cost_matrix(std::span<const Track> tracks, std::span<const Detection3D> detections,
                            double gate);

/// Moves ego-frame detection centers into the city frame; dims unchanged.
std::vector<Detection3D> compensate_to_city(std::span<const Detection3D> detections,
                                            const RigidTransform& ego_pose);

/// City-frame multi-object tracker. Not thread-safe: drive it from a single
/// owner in strictly increasing timestamp order.
class Tracker {
 public:
  explicit Tracker(TrackerConfig config = {});

  /// Predict, associate, update, manage lifecycle; returns the Confirmed
  /// tracks (including ones coasting through a miss) after the step.
  /// Throws std::invalid_argument if `timestamp` does not increase.
  std::vector<TrackSnapshot> step(std::span<const Detection3D> detections, double timestamp);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return config_; }
  std::int64_t tracks_created() const { return next_id_ - 1; }
  std::int64_t tracks_deleted() const { return deleted_; }

 private:
  TrackerConfig config_;
  std::vector<Track> tracks_;
  std::optional<double> last_timestamp_;
  std::int64_t next_id_ = 1;
  std::int64_t deleted_ = 0;
};

}  // namespace lidartrack
