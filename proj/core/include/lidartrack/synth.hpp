#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lidartrack/dataset_io.hpp"

namespace lidartrack {

enum class EgoMotion { kStatic, kStraight };

/// Synthetic highway-like scene: cars drive straight at constant velocity in
/// parallel lanes along the ego heading, the ground is flat at
/// `ground_z` in the ego frame, and clutter is scattered uniformly.
struct SynthConfig {
  int n_cars = 5;
  int n_frames = 50;
  double dt = 0.1;
  double car_length = 4.5;
  double car_width = 1.8;
  double car_height = 1.5;
  double speed_min = 5.0;
  double speed_max = 15.0;
  EgoMotion ego_motion = EgoMotion::kStraight;
  double ego_speed = 10.0;
  double ego_heading = 0.0;  // radians, city frame
  double ego_start_x = 250.0;
  double ego_start_y = 120.0;
  int points_per_car = 3000;
  double ground_density = 2.0;  // points per square meter
  double sensor_range = 40.0;   // half-width of the sensed square around the ego
  int clutter_points = 200;
  double noise_sigma = 0.02;
  double lane_spacing = 5.0;
  double ground_z = -1.7;
  double drivable_resolution = 0.5;
  bool write_masks = true;
  std::uint64_t rng_seed = 42;

  /// Throws ConfigError for negative counts, non-positive dt or dimensions.
  void validate() const;
};

struct SynthCar {
  std::string id;
  Vec3 start;  // city-frame box center at t = 0
  double vx = 0.0;
  double vy = 0.0;
};

struct SynthScene {
  Sequence sequence;
  std::vector<SynthCar> cars;
};

/// Builds the scene in memory. Point coordinates are rounded to float32 so
/// the scene survives write_sequence/load_sequence unchanged.
SynthScene make_scene(const SynthConfig& cfg);

/// make_scene + write_sequence. Deterministic: the same config produces a
/// byte-identical directory.
SynthScene generate(const SynthConfig& cfg, const std::filesystem::path& out);

}  // namespace lidartrack
