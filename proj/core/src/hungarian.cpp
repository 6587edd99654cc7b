#include "lidartrack/hungarian.hpp"

#include <algorithm>
#include <limits>

namespace lidartrack {

Assignment hungarian(const Eigen::MatrixXd& cost, double forbidden) {
  const auto rows = static_cast<std::size_t>(cost.rows());
  const auto cols = static_cast<std::size_t>(cost.cols());
  const std::size_t n = std::max(rows, cols);

  auto at = [&](std::size_t r, std::size_t c) -> double {
    return (r < rows && c < cols) ? cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))
                                  : 0.0;
  };

  // Shortest augmenting path with row/column potentials; 1-based with
  // column 0 as the virtual source.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> row_of_col(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> min_v(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = row_of_col[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) {
          continue;
        }
        const double reduced = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < min_v[j]) {
          min_v[j] = reduced;
          way[j] = j0;
        }
        if (min_v[j] < delta) {
          delta = min_v[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          min_v[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(rows, cols);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t r = row_of_col[j] - 1;
    const std::size_t c = j - 1;
    if (r < rows && c < cols && at(r, c) < forbidden) {
      col_of_row[r] = c;
    }
  }

  Assignment result;
  std::vector<bool> col_used(cols, false);
  for (std::size_t r = 0; r < rows; ++r) {
    if (col_of_row[r] < cols) {
      result.matches.emplace_back(r, col_of_row[r]);
      col_used[col_of_row[r]] = true;
    } else {
      result.unmatched_rows.push_back(r);
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (!col_used[c]) {
      result.unmatched_cols.push_back(c);
    }
  }
  return result;
}

}  // namespace lidartrack
