#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <utility>
#include <vector>

namespace lidartrack {

/// Cost assigned to pairs that must not be matched. Large enough that the
/// solver trades any number of real pairings against one forbidden one.
inline constexpr double kForbiddenCost = 1.0e9;

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (row, col), ascending row
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;
};

/// Minimum-total-cost one-to-one assignment on a rectangular matrix (padded
/// to square with zeros internally). Optimal pairs whose cost is >=
/// `forbidden` are reported as unmatched.
Assignment hungarian(const Eigen::MatrixXd& cost, double forbidden = kForbiddenCost);

}  // namespace lidartrack
