#include "vigil/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vigil/errors.hpp"

namespace vigil {

namespace {

/// Shortest-augmenting-path Hungarian method for rows <= cols. Returns the
/// column matched to every row.
std::vector<int> solve_rows_le_cols(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

double optimal_cost(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() <= a.cols()) {
    const auto match = solve_rows_le_cols(a);
    double total = 0.0;
    for (int r = 0; r < static_cast<int>(match.size()); ++r) total += a(r, match[r]);
    return total;
  }
  const Eigen::MatrixXd t = a.transpose();
  const auto match = solve_rows_le_cols(t);
  // Sum in row order of the original matrix.
  std::vector<int> col_of_row(a.rows(), -1);
  for (int c = 0; c < static_cast<int>(match.size()); ++c) col_of_row[match[c]] = c;
  double total = 0.0;
  for (int r = 0; r < static_cast<int>(a.rows()); ++r) {
    if (col_of_row[r] >= 0) total += a(r, col_of_row[r]);
  }
  return total;
}

Eigen::MatrixXd select(const Eigen::MatrixXd& a, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = a(rows[r], cols[c]);
  return out;
}

void check_finite(const Eigen::MatrixXd& cost) {
  if (!cost.allFinite()) {
    throw ValidationError("hungarian: cost matrix contains a non-finite entry");
  }
}

}  // namespace

double min_assignment_cost(const Eigen::MatrixXd& cost) {
  check_finite(cost);
  return optimal_cost(cost);
}

Assignment hungarian(const Eigen::MatrixXd& cost) {
  check_finite(cost);
  const int R = static_cast<int>(cost.rows());
  const int C = static_cast<int>(cost.cols());
  const double tol = 1e-9 * std::max(1.0, R * C > 0 ? cost.cwiseAbs().maxCoeff() : 0.0);

  Assignment result;
  std::vector<int> free_cols(C);
  std::iota(free_cols.begin(), free_cols.end(), 0);

  // Fix rows greedily in order, taking the smallest column (or, failing
  // that, leaving the row unmatched) that still admits an optimal completion.
  std::vector<int> rest_rows;
  double target = optimal_cost(cost);
  for (int r = 0; r < R; ++r) {
    rest_rows.clear();
    for (int rr = r + 1; rr < R; ++rr) rest_rows.push_back(rr);
    const int cols_left = static_cast<int>(free_cols.size());
    if (cols_left == 0) {
      result.unmatched_rows.push_back(r);
      continue;
    }
    bool fixed = false;
    for (std::size_t ci = 0; ci < free_cols.size(); ++ci) {
      std::vector<int> remaining = free_cols;
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(ci));
      const double sub = optimal_cost(select(cost, rest_rows, remaining));
      if (cost(r, free_cols[ci]) + sub <= target + tol) {
        result.pairs.emplace_back(r, free_cols[ci]);
        free_cols = std::move(remaining);
        target = sub;
        fixed = true;
        break;
      }
    }
    // Only reachable while more rows than columns remain.
    if (!fixed) result.unmatched_rows.push_back(r);
  }
  result.unmatched_columns = free_cols;
  for (const auto& [r, c] : result.pairs) result.cost += cost(r, c);
  return result;
}

}  // namespace vigil
