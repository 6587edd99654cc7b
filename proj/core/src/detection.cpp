#include "lidartrack/detection.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "lidartrack/errors.hpp"

namespace lidartrack {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void check_range(const char* name, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw ConfigError(std::string("limits: ") + name + " bounds must satisfy 0 < min < max");
  }
}

}  // namespace

void BoxLimits::validate() const {
  check_range("length", min_length, max_length);
  check_range("width", min_width, max_width);
  check_range("height", min_height, max_height);
  check_range("area", min_area, max_area);
}

Detection3D fit_box(std::span<const Vec3> cluster_points) {
  if (cluster_points.empty()) {
    throw std::invalid_argument("fit_box: empty cluster");
  }
  Vec3 lo = cluster_points.front();
  Vec3 hi = lo;
  for (const auto& p : cluster_points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  Detection3D d;
  d.center = {(lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0, (lo.z + hi.z) / 2.0};
  d.length = hi.x - lo.x;
  d.width = hi.y - lo.y;
  d.height = hi.z - lo.z;
  d.n_points = cluster_points.size();
  return d;
}

bool passes_heuristics(const Detection3D& d, const BoxLimits& limits) {
  const double length = std::max(d.length, d.width);
  const double width = std::min(d.length, d.width);
  const double area = length * width;
  return length >= limits.min_length && length <= limits.max_length &&
         width >= limits.min_width && width <= limits.max_width &&
         d.height >= limits.min_height && d.height <= limits.max_height &&
         area >= limits.min_area && area <= limits.max_area;
}

std::uint64_t frame_seed(std::uint64_t base_seed, std::int64_t frame_index) {
  // splitmix64 finalizer
  std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(frame_index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DetectionResult detect(const Frame& frame, const SceneContext& scene, const DetectorConfig& cfg,
                       bool keep_filtered_cloud) {
  DetectionResult result;
  auto& stats = result.stats;
  auto& t = stats.timings;
  stats.points_in = frame.cloud.size();

  auto start = Clock::now();
  PointCloud cloud = downsample_stride(frame.cloud, cfg.preprocess.stride);
  t.downsample_ms = elapsed_ms(start);
  stats.after_downsample = cloud.size();

  start = Clock::now();
  PreprocessConfig ground_cfg = cfg.preprocess;
  ground_cfg.rng_seed = frame_seed(cfg.preprocess.rng_seed, frame.index);
  auto ground = remove_ground(cloud, ground_cfg);
  cloud = std::move(ground.cloud);
  stats.ground_warning = ground.warning;
  t.ground_ms = elapsed_ms(start);
  stats.after_ground = cloud.size();

  start = Clock::now();
  if (cfg.preprocess.drivable_filter_enabled) {
    if (scene.drivable != nullptr) {
      cloud = filter_drivable(cloud, *scene.drivable, frame.ego_pose);
    } else {
      stats.drivable_skipped = true;
    }
  }
  t.drivable_ms = elapsed_ms(start);
  stats.after_drivable = cloud.size();

  start = Clock::now();
  if (cfg.preprocess.mask_filter_enabled) {
    cloud = filter_by_masks(cloud, scene.cameras, frame.masks, cfg.preprocess.mask_filter_strict);
  }
  t.masks_ms = elapsed_ms(start);
  stats.after_masks = cloud.size();

  start = Clock::now();
  const KdTree index(cloud.points);
  t.index_ms = elapsed_ms(start);

  start = Clock::now();
  const ClusterLabels labels = dbscan(cloud.points, cfg.clustering, index);
  t.cluster_ms = elapsed_ms(start);
  stats.clusters = static_cast<std::size_t>(labels.cluster_count);

  start = Clock::now();
  std::vector<Vec3> members;
  for (const auto& cluster : labels.members()) {
    members.clear();
    for (const std::size_t i : cluster) {
      members.push_back(cloud.points[i]);
    }
    Detection3D d = fit_box(members);
    ++stats.boxes_fitted;
    if (!passes_heuristics(d, cfg.limits)) {
      continue;
    }
    d.center = frame.ego_pose.apply(d.center);
    d.frame_index = frame.index;
    result.detections.push_back(d);
  }
  std::sort(result.detections.begin(), result.detections.end(),
            [](const Detection3D& a, const Detection3D& b) {
              return a.center.x < b.center.x || (a.center.x == b.center.x && a.center.y < b.center.y);
            });
  t.boxes_ms = elapsed_ms(start);
  stats.detections = result.detections.size();

  if (keep_filtered_cloud) {
    result.filtered_cloud = std::move(cloud);
  }
  return result;
}

}  // namespace lidartrack
