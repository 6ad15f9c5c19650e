#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace vigil {

struct Assignment {
  /// Matched (row, column) pairs, sorted by row.
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_columns;
  double cost = 0.0;
};

/// Minimum-cost assignment of size min(R, C).
///
/// Among equal-cost optima the lexicographically smallest row-sorted pair
/// list is returned. Costs are compared with a tolerance of
/// 1e-9 * max(1, max |entry|), so exact ties in integer-valued matrices are
/// resolved exactly. Throws ValidationError on non-finite entries.
Assignment hungarian(const Eigen::MatrixXd& cost);

/// Optimal total cost only (shortest augmenting path, O(n^2 m)).
double min_assignment_cost(const Eigen::MatrixXd& cost);

}  // namespace vigil
