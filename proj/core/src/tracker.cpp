#include "lidartrack/tracker.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lidartrack/errors.hpp"

namespace lidartrack {

void TrackerConfig::validate() const {
  if (hit_confirm_threshold < 1 || miss_delete_threshold < 1) {
    throw ConfigError("tracker: hit/miss thresholds must be >= 1");
  }
  if (!(gate_distance > 0.0) || !(process_noise_accel > 0.0) || !(measurement_noise_pos > 0.0) ||
      !(initial_velocity_std > 0.0)) {
    throw ConfigError("tracker: gate and noise parameters must be > 0");
  }
}

Eigen::MatrixXd cost_matrix(std::span<const Track> tracks, std::span<const Detection3D> detections,
                            double gate) {
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(tracks.size()),
                       static_cast<Eigen::Index>(detections.size()));
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t j = 0; j < detections.size(); ++j) {
      const double d = std::hypot(tracks[i].kalman.x() - detections[j].center.x,
                                  tracks[i].kalman.y() - detections[j].center.y);
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          d > gate ? kForbiddenCost : d;
    }
  }
  return cost;
}

std::vector<Detection3D> compensate_to_city(std::span<const Detection3D> detections,
                                            const RigidTransform& ego_pose) {
  std::vector<Detection3D> out(detections.begin(), detections.end());
  for (auto& d : out) {
    d.center = ego_pose.apply(d.center);
  }
  return out;
}

Tracker::Tracker(TrackerConfig config) : config_(config) { config_.validate(); }

std::vector<TrackSnapshot> Tracker::step(std::span<const Detection3D> detections,
                                         double timestamp) {
  if (!std::isfinite(timestamp)) {
    throw std::invalid_argument("tracker: timestamp must be finite");
  }
  if (last_timestamp_ && !(timestamp > *last_timestamp_)) {
    throw std::invalid_argument("tracker: timestamp " + std::to_string(timestamp) +
                                " does not follow " + std::to_string(*last_timestamp_));
  }
  if (last_timestamp_) {
    const double dt = timestamp - *last_timestamp_;
    for (auto& t : tracks_) {
      t.kalman = kalman_predict(t.kalman, dt, config_.process_noise_accel);
    }
  }
  last_timestamp_ = timestamp;

  const Assignment assignment =
      hungarian(cost_matrix(tracks_, detections, config_.gate_distance));

  for (const auto& [ti, di] : assignment.matches) {
    Track& t = tracks_[ti];
    const Detection3D& d = detections[di];
    t.kalman = kalman_update(t.kalman, d.center.x, d.center.y, config_.measurement_noise_pos);
    t.kalman.z = d.center.z;
    t.kalman.length = d.length;
    t.kalman.width = d.width;
    t.kalman.height = d.height;
    ++t.hits;
    t.consecutive_misses = 0;
  }
  for (const std::size_t ti : assignment.unmatched_rows) {
    Track& t = tracks_[ti];
    if (++t.consecutive_misses >= config_.miss_delete_threshold) {
      t.status = TrackStatus::kDeleted;
    }
  }
  for (const std::size_t di : assignment.unmatched_cols) {
    const Detection3D& d = detections[di];
    Track t;
    t.id = next_id_++;
    t.kalman = KalmanState::at_position(config_.motion_model, d.center.x, d.center.y,
                                        config_.measurement_noise_pos,
                                        config_.initial_velocity_std,
                                        config_.initial_velocity_std);
    t.kalman.z = d.center.z;
    t.kalman.length = d.length;
    t.kalman.width = d.width;
    t.kalman.height = d.height;
    tracks_.push_back(std::move(t));
  }

  std::vector<TrackSnapshot> confirmed;
  std::erase_if(tracks_, [this](const Track& t) {
    if (t.status == TrackStatus::kDeleted) {
      ++deleted_;
      return true;
    }
    return false;
  });
  for (auto& t : tracks_) {
    if (t.status == TrackStatus::kTentative && t.hits >= config_.hit_confirm_threshold) {
      t.status = TrackStatus::kConfirmed;
    }
    if (t.status == TrackStatus::kConfirmed) {
      const auto& k = t.kalman;
      confirmed.push_back({t.id, {k.x(), k.y(), k.z}, k.vx(), k.vy(), k.length, k.width, k.height,
                           t.hits, t.consecutive_misses});
    }
  }
  return confirmed;
}

}  // namespace lidartrack
