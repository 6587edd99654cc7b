#include "lidartrack/dbscan.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "lidartrack/errors.hpp"

namespace lidartrack {

void ClusteringParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw ConfigError("clustering.eps must be > 0");
  }
  if (min_points < 1) {
    throw ConfigError("clustering.min_points must be >= 1");
  }
}

std::vector<std::vector<std::size_t>> ClusterLabels::members() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(cluster_count));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kNoise) {
      out[static_cast<std::size_t>(labels[i])].push_back(i);
    }
  }
  return out;
}

ClusterLabels dbscan(std::size_t n_points, const ClusteringParams& params,
                     const NeighborQuery& neighbors) {
  params.validate();
  constexpr std::int32_t kUnvisited = -2;
  const auto min_pts = static_cast<std::size_t>(params.min_points);

  ClusterLabels result;
  result.labels.assign(n_points, kUnvisited);
  result.core.assign(n_points, false);

  std::vector<std::size_t> scratch;
  std::deque<std::size_t> frontier;
  for (std::size_t seed = 0; seed < n_points; ++seed) {
    if (result.labels[seed] != kUnvisited) {
      continue;
    }
    neighbors(seed, scratch);
    if (scratch.size() < min_pts) {
      result.labels[seed] = ClusterLabels::kNoise;  // may later become a border point
      continue;
    }
    const std::int32_t cluster = result.cluster_count++;
    result.labels[seed] = cluster;
    result.core[seed] = true;
    frontier.assign(scratch.begin(), scratch.end());
    while (!frontier.empty()) {
      const std::size_t q = frontier.front();
      frontier.pop_front();
      if (result.labels[q] == ClusterLabels::kNoise) {
        result.labels[q] = cluster;  // border point, already known non-core
        continue;
      }
      if (result.labels[q] != kUnvisited) {
        continue;
      }
      result.labels[q] = cluster;
      neighbors(q, scratch);
      if (scratch.size() >= min_pts) {
        result.core[q] = true;
        for (const std::size_t r : scratch) {
          if (result.labels[r] == kUnvisited || result.labels[r] == ClusterLabels::kNoise) {
            frontier.push_back(r);
          }
        }
      }
    }
  }
  return result;
}

ClusterLabels dbscan(std::span<const Vec3> points, const ClusteringParams& params,
                     const KdTree& index) {
  if (index.size() != points.size()) {
    throw std::invalid_argument("dbscan: index built over " + std::to_string(index.size()) +
                                " points but " + std::to_string(points.size()) + " were given");
  }
  return dbscan(points.size(), params, [&](std::size_t i, std::vector<std::size_t>& out) {
    index.radius_query_unsorted(points[i], params.eps, out);
  });
}

ClusterLabels dbscan_linear_scan(std::span<const Vec3> points, const ClusteringParams& params) {
  const double r2 = params.eps * params.eps;
  return dbscan(points.size(), params, [&](std::size_t i, std::vector<std::size_t>& out) {
    out.clear();
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (squared_distance(points[j], points[i]) <= r2) {
        out.push_back(j);
      }
    }
  });
}

}  // namespace lidartrack
