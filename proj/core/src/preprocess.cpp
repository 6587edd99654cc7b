#include "lidartrack/preprocess.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>

#include "lidartrack/errors.hpp"

namespace lidartrack {

void PreprocessConfig::validate() const {
  if (stride < 1) {
    throw ConfigError("preprocess.stride must be >= 1");
  }
  if (!(ground_split_height > 0.0)) {
    throw ConfigError("preprocess.ground_split_height must be > 0");
  }
  if (ransac_iterations < 1) {
    throw ConfigError("preprocess.ransac_iterations must be >= 1");
  }
  if (!(ransac_inlier_tol > 0.0)) {
    throw ConfigError("preprocess.ransac_inlier_tol must be > 0");
  }
  if (min_plane_points < 3) {
    throw ConfigError("preprocess.min_plane_points must be >= 3");
  }
}

PointCloud downsample_stride(const PointCloud& cloud, int stride) {
  if (stride < 1) {
    throw std::invalid_argument("stride must be >= 1");
  }
  PointCloud out;
  out.frame = cloud.frame;
  const auto step = static_cast<std::size_t>(stride);
  out.points.reserve((cloud.points.size() + step - 1) / step);
  for (std::size_t i = 0; i < cloud.points.size(); i += step) {
    out.points.push_back(cloud.points[i]);
  }
  return out;
}

Plane fit_ground_plane(std::span<const Vec3> points, const PreprocessConfig& cfg) {
  const std::size_t needed = std::max<std::size_t>(3, static_cast<std::size_t>(cfg.min_plane_points));
  if (points.size() < needed) {
    throw DataError("insufficient ground candidates: " + std::to_string(points.size()) +
                    " < " + std::to_string(needed));
  }
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);

  std::optional<Plane> best;
  std::size_t best_inliers = 0;
  for (int it = 0; it < cfg.ransac_iterations; ++it) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) {
      j = pick(rng);
    }
    std::size_t k = pick(rng);
    while (k == i || k == j) {
      k = pick(rng);
    }
    const Vec3 n = cross(points[j] - points[i], points[k] - points[i]);
    const double len = norm(n);
    if (!(len > 1e-12)) {
      continue;  // collinear sample
    }
    Plane candidate;
    candidate.normal = (1.0 / len) * n;
    if (candidate.normal.z < 0.0) {
      candidate.normal = -1.0 * candidate.normal;
    }
    candidate.offset = -dot(candidate.normal, points[i]);

    std::size_t inliers = 0;
    for (const auto& p : points) {
      if (std::abs(candidate.signed_distance(p)) <= cfg.ransac_inlier_tol) {
        ++inliers;
      }
    }
    if (inliers > best_inliers) {
      best_inliers = inliers;
      best = candidate;
    }
  }
  if (!best) {
    throw DataError("insufficient ground candidates: every RANSAC sample was degenerate");
  }
  return *best;
}

GroundRemovalResult remove_ground(const PointCloud& cloud, const PreprocessConfig& cfg) {
  const double split = -cfg.ground_split_height;
  std::vector<Vec3> lower;
  for (const auto& p : cloud.points) {
    if (p.z < split) {
      lower.push_back(p);
    }
  }

  GroundRemovalResult result;
  try {
    result.plane = fit_ground_plane(lower, cfg);
  } catch (const DataError&) {
    result.cloud = cloud;
    result.warning = true;
    return result;
  }

  result.cloud.frame = cloud.frame;
  result.cloud.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    if (p.z < split && std::abs(result.plane->signed_distance(p)) <= cfg.ransac_inlier_tol) {
      continue;
    }
    result.cloud.points.push_back(p);
  }
  return result;
}

PointCloud filter_drivable(const PointCloud& cloud, const DrivableGrid& grid,
                           const RigidTransform& ego_pose) {
  PointCloud out;
  out.frame = cloud.frame;
  for (const auto& p : cloud.points) {
    const Vec3 c = ego_pose.apply(p);
    if (grid.drivable_at(c.x, c.y)) {
      out.points.push_back(p);
    }
  }
  return out;
}

bool point_in_polygon(double u, double v, std::span<const std::pair<double, double>> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) {
    return false;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto [xi, yi] = polygon[i];
    const auto [xj, yj] = polygon[j];

    // On-edge test: collinear and within the segment's bounding box.
    const double crossp = (xj - xi) * (v - yi) - (yj - yi) * (u - xi);
    const double scale = std::max({std::abs(xj - xi), std::abs(yj - yi), 1.0});
    if (std::abs(crossp) <= 1e-12 * scale * scale && u >= std::min(xi, xj) &&
        u <= std::max(xi, xj) && v >= std::min(yi, yj) && v <= std::max(yi, yj)) {
      return true;
    }

    if ((yi > v) != (yj > v)) {
      const double x_cross = xi + (v - yi) * (xj - xi) / (yj - yi);
      if (u < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

PointCloud filter_by_masks(const PointCloud& cloud, std::span<const CameraModel> cameras,
                           std::span<const MaskRegion> masks, bool strict) {
  std::map<std::string, std::vector<const MaskRegion*>> by_camera;
  for (const auto& cam : cameras) {
    by_camera[cam.id];
  }
  for (const auto& m : masks) {
    const auto it = by_camera.find(m.camera_id);
    if (it == by_camera.end()) {
      throw ConfigError("mask references unknown camera '" + m.camera_id + "'");
    }
    it->second.push_back(&m);
  }
  if (cameras.empty()) {
    return cloud;
  }

  PointCloud out;
  out.frame = cloud.frame;
  for (const auto& p : cloud.points) {
    bool visible = false;
    bool inside = false;
    for (const auto& cam : cameras) {
      const auto px = project_to_image(cam, p);
      if (!px) {
        continue;
      }
      visible = true;
      for (const MaskRegion* m : by_camera[cam.id]) {
        if (point_in_polygon(px->u, px->v, m->polygon)) {
          inside = true;
          break;
        }
      }
      if (inside) {
        break;
      }
    }
    if (inside || (!visible && !strict)) {
      out.points.push_back(p);
    }
  }
  return out;
}

}  // namespace lidartrack
