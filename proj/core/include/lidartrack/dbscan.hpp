#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lidartrack/geometry.hpp"
#include "lidartrack/kd_tree.hpp"

namespace lidartrack {

struct ClusteringParams {
  double eps = 0.7;
  int min_points = 10;

  void validate() const;
};

struct ClusterLabels {
  static constexpr std::int32_t kNoise = -1;

  /// Per point: kNoise or a cluster id in [0, cluster_count).
  std::vector<std::int32_t> labels;
  /// Per point: whether it had >= min_points neighbours (itself included).
  std::vector<bool> core;
  std::int32_t cluster_count = 0;

  /// Point indices grouped by cluster id.
  std::vector<std::vector<std::size_t>> members() const;
};

/// Writes the indices within `eps` of point `i` (itself included) into `out`.
using NeighborQuery = std::function<void(std::size_t i, std::vector<std::size_t>& out)>;

/// DBSCAN driven by an arbitrary neighbourhood query.
///
/// Points are scanned in index order; each unlabelled core point seeds a new
/// cluster which is expanded breadth-first to completion before the scan
/// resumes. Cluster ids are therefore ordered by their smallest core index,
/// and a border point belongs to the first cluster that reaches it.
ClusterLabels dbscan(std::size_t n_points, const ClusteringParams& params,
                     const NeighborQuery& neighbors);

/// DBSCAN using a KD-tree built over exactly `points`. Throws
/// std::invalid_argument if the sizes differ.
ClusterLabels dbscan(std::span<const Vec3> points, const ClusteringParams& params,
                     const KdTree& index);

/// DBSCAN with O(N) linear-scan neighbourhoods (O(N^2) total). Baseline for
/// benchmarking the indexed variant.
ClusterLabels dbscan_linear_scan(std::span<const Vec3> points, const ClusteringParams& params);

}  // namespace lidartrack
