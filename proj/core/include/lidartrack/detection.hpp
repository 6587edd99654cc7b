#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lidartrack/dataset_io.hpp"
#include "lidartrack/dbscan.hpp"
#include "lidartrack/geometry.hpp"
#include "lidartrack/preprocess.hpp"

namespace lidartrack {

/// Size bounds for a car-like box. Length is the larger horizontal extent.
/// Defaults cover passenger cars through vans.
struct BoxLimits {
  double min_length = 1.0;
  double max_length = 7.0;
  double min_width = 0.5;
  double max_width = 3.0;
  double min_height = 0.5;
  double max_height = 3.0;
  double min_area = 0.5;
  double max_area = 20.0;

  void validate() const;
};

/// Axis-aligned box. `length` is the x-extent, `width` the y-extent.
struct Detection3D {
  Vec3 center;
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
  std::size_t n_points = 0;
  std::int64_t frame_index = 0;
};

/// Per-axis min/max box; center is the midpoint of the extents. Throws
/// std::invalid_argument on an empty cluster.
Detection3D fit_box(std::span<const Vec3> cluster_points);

bool passes_heuristics(const Detection3D& d, const BoxLimits& limits);

struct DetectorConfig {
  PreprocessConfig preprocess;
  ClusteringParams clustering;
  BoxLimits limits;
};

/// Sensor calibration and map data shared by every frame of a sequence.
struct SceneContext {
  std::span<const CameraModel> cameras;
  const DrivableGrid* drivable = nullptr;
};

struct StageTimings {
  double downsample_ms = 0.0;
  double ground_ms = 0.0;
  double drivable_ms = 0.0;
  double masks_ms = 0.0;
  double index_ms = 0.0;
  double cluster_ms = 0.0;
  double boxes_ms = 0.0;
};

struct DetectionStats {
  std::size_t points_in = 0;
  std::size_t after_downsample = 0;
  std::size_t after_ground = 0;
  std::size_t after_drivable = 0;
  std::size_t after_masks = 0;
  std::size_t clusters = 0;
  std::size_t boxes_fitted = 0;
  std::size_t detections = 0;
  bool ground_warning = false;
  bool drivable_skipped = false;
  StageTimings timings;
};

struct DetectionResult {
  std::vector<Detection3D> detections;  // city frame
  DetectionStats stats;
  /// Clustering input, ego frame. Filled only when requested.
  std::optional<PointCloud> filtered_cloud;
};

/// Seed used for the frame's RANSAC run: a fixed mix of the configured seed
/// and the frame index, so frames are independent of processing order.
std::uint64_t frame_seed(std::uint64_t base_seed, std::int64_t frame_index);

/// downsample -> ground removal -> drivable filter -> mask filter -> DBSCAN ->
/// box fit -> size heuristics -> ego-to-city. Output sorted by center x, then y.
/// The drivable filter is skipped (and flagged in stats) when the scene has no
/// grid.
DetectionResult detect(const Frame& frame, const SceneContext& scene, const DetectorConfig& cfg,
                       bool keep_filtered_cloud = false);

}  // namespace lidartrack
