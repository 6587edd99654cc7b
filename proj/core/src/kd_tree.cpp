#include "lidartrack/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lidartrack {

KdTree::KdTree(std::span<const Vec3> points, std::size_t leaf_size)
    : points_(points.begin(), points.end()), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  if (points_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("KdTree supports at most 2^32-1 points");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0U);
  if (!points_.empty()) {
    nodes_.reserve(2 * (points_.size() / leaf_size_ + 1));
    build(0, static_cast<std::uint32_t>(points_.size()), 1);
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::size_t level) {
  depth_ = std::max(depth_, level);
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end, -1, -1, 0, 0.0});
  if (end - begin <= leaf_size_) {
    return id;
  }
  const auto axis = static_cast<int>((level - 1) % 3);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = points_[a][axis];
                     const double cb = points_[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = points_[order_[mid]][axis];
  // nodes_ may reallocate while children are built.
  const std::int32_t left = build(begin, mid, level + 1);
  const std::int32_t right = build(mid, end, level + 1);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.axis = static_cast<std::uint8_t>(axis);
  node.split = split;
  return id;
}

void KdTree::query(std::int32_t node_id, const Vec3& center, double r2,
                   std::vector<std::size_t>& out) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t idx = order_[i];
      if (squared_distance(points_[idx], center) <= r2) {
        out.push_back(idx);
      }
    }
    return;
  }
  // Left child holds coordinates <= split, right child >= split. A subtree
  // is skipped only when the squared gap along the axis alone exceeds r2,
  // which (by monotonicity of rounding) bounds the full squared distance.
  const double diff = center[node.axis] - node.split;
  if (!(diff > 0.0 && diff * diff > r2)) {
    query(node.left, center, r2, out);
  }
  if (!(diff < 0.0 && diff * diff > r2)) {
    query(node.right, center, r2, out);
  }
}

void KdTree::radius_query_unsorted(const Vec3& center, double radius,
                                   std::vector<std::size_t>& out) const {
  if (!(radius >= 0.0)) {
    throw std::invalid_argument("radius must be non-negative");
  }
  out.clear();
  if (nodes_.empty()) {
    return;
  }
  query(0, center, radius * radius, out);
}

std::vector<std::size_t> KdTree::radius_query(const Vec3& center, double radius) const {
  std::vector<std::size_t> out;
  radius_query_unsorted(center, radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lidartrack
