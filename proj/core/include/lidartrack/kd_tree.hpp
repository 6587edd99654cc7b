#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lidartrack/geometry.hpp"

namespace lidartrack {

/// Static 3D KD-tree with exact, boundary-inclusive radius queries.
///
/// Nodes split at the median (nth_element, ties broken by point index) along
/// an axis that cycles x -> y -> z with depth. The tree owns a copy of the
/// points and is immutable after construction, so concurrent queries are safe.
class KdTree {
 public:
  static constexpr std::size_t kDefaultLeafSize = 16;

  KdTree() = default;
  explicit KdTree(std::span<const Vec3> points, std::size_t leaf_size = kDefaultLeafSize);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const Vec3> points() const { return points_; }
  std::size_t leaf_size() const { return leaf_size_; }
  /// Number of levels; 0 for an empty tree, 1 for a single leaf.
  std::size_t depth() const { return depth_; }

  /// Indices i with |p_i - center| <= radius, ascending. Throws
  /// std::invalid_argument for negative or NaN radius.
  std::vector<std::size_t> radius_query(const Vec3& center, double radius) const;

  /// Same as radius_query but appends into `out` (cleared first) without
  /// sorting. Used on hot paths.
  void radius_query_unsorted(const Vec3& center, double radius,
                             std::vector<std::size_t>& out) const;

  /// Every index exactly once, in leaf order. Exposed for structural tests.
  std::span<const std::uint32_t> permutation() const { return order_; }

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint8_t axis = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::size_t level);
  void query(std::int32_t node, const Vec3& center, double r2,
             std::vector<std::size_t>& out) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_ = kDefaultLeafSize;
  std::size_t depth_ = 0;
};

}  // namespace lidartrack
