#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lidartrack/dataset_io.hpp"
#include "lidartrack/geometry.hpp"

namespace lidartrack {

/// Plane {p : dot(normal, p) + offset = 0} with unit normal, oriented so
/// that normal.z >= 0.
struct Plane {
  Vec3 normal{0.0, 0.0, 1.0};
  double offset = 0.0;

  double signed_distance(const Vec3& p) const { return dot(normal, p) + offset; }
};

struct PreprocessConfig {
  int stride = 10;
  /// Points with z < -ground_split_height (sensor at the origin) are ground
  /// candidates.
  double ground_split_height = 1.5;
  int ransac_iterations = 100;
  double ransac_inlier_tol = 0.15;
  int min_plane_points = 50;
  bool mask_filter_enabled = false;
  /// Drop points that no camera sees, instead of keeping them.
  bool mask_filter_strict = false;
  bool drivable_filter_enabled = true;
  std::uint64_t rng_seed = 0;

  /// Throws ConfigError on stride < 1, non-positive tolerances or counts.
  void validate() const;
};

PointCloud downsample_stride(const PointCloud& cloud, int stride);

/// RANSAC over `ransac_iterations` random 3-point samples drawn with
/// `rng_seed`. Keeps the first plane reaching the highest inlier count.
/// Throws DataError("insufficient ground candidates") below
/// `min_plane_points` candidates or when every sample was degenerate.
Plane fit_ground_plane(std::span<const Vec3> points, const PreprocessConfig& cfg);

struct GroundRemovalResult {
  PointCloud cloud;
  std::optional<Plane> plane;
  /// Set when no plane could be fitted and the cloud came back unchanged.
  bool warning = false;
};

/// Splits at z = -ground_split_height, fits a plane to the lower part and
/// drops its inliers. Input order is preserved.
GroundRemovalResult remove_ground(const PointCloud& cloud, const PreprocessConfig& cfg);

/// Keeps points whose city-frame (x, y) falls in a drivable cell.
PointCloud filter_drivable(const PointCloud& cloud, const DrivableGrid& grid,
                           const RigidTransform& ego_pose);

/// Ray-casting point-in-polygon; points on an edge or vertex count as inside.
bool point_in_polygon(double u, double v, std::span<const std::pair<double, double>> polygon);

/// Keeps a point if some camera sees it inside one of that camera's masks.
/// Points seen by a camera but inside none of its masks are dropped. Points
/// no camera sees are kept unless `strict`. With no cameras this is the
/// identity. Throws ConfigError for masks naming an unknown camera.
PointCloud filter_by_masks(const PointCloud& cloud, std::span<const CameraModel> cameras,
                           std::span<const MaskRegion> masks, bool strict = false);

}  // namespace lidartrack
