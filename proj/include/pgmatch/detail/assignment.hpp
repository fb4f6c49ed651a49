#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace pgmatch::detail {

inline constexpr std::int64_t kForbidden = std::numeric_limits<std::int64_t>::max() / 8;

struct Assignment {
  std::int64_t cost = 0;
  std::vector<int> row_to_col;  // -1 when rows is empty
};

// Minimum-cost assignment of every row to a distinct column (rows <= cols),
// Hungarian method with potentials. Entries >= kForbidden are treated as
// forbidden; if one is used, the returned cost is >= kForbidden.
inline Assignment min_cost_assignment(const std::vector<std::vector<std::int64_t>>& cost) {
  const int n = static_cast<int>(cost.size());
  Assignment result;
  if (n == 0) return result;
  const int m = static_cast<int>(cost[0].size());
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;

  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      std::int64_t delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
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

  result.row_to_col.assign(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) result.row_to_col[p[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) result.cost += cost[i][result.row_to_col[i]];
  return result;
}

// Minimum-cost partial matching between `rows` and `cols` where each row is
// either matched (match[i][j], kForbidden if not allowed) or left alone at
// cost leave_row[i]; likewise leave_col[j] for columns.
inline Assignment min_cost_partial_matching(const std::vector<std::vector<std::int64_t>>& match,
                                            const std::vector<std::int64_t>& leave_row,
                                            const std::vector<std::int64_t>& leave_col) {
  const std::size_t n = leave_row.size();
  const std::size_t m = leave_col.size();
  const std::size_t size = n + m;
  Assignment result;
  if (size == 0) return result;
  std::vector<std::vector<std::int64_t>> c(size, std::vector<std::int64_t>(size, kForbidden));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) c[i][j] = match[i][j];
    c[i][m + i] = leave_row[i];
  }
  for (std::size_t j = 0; j < m; ++j) {
    c[n + j][j] = leave_col[j];
    for (std::size_t i = 0; i < n; ++i) c[n + j][m + i] = 0;
  }
  Assignment full = min_cost_assignment(c);
  result.cost = full.cost;
  result.row_to_col.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const int j = full.row_to_col[i];
    if (j >= 0 && static_cast<std::size_t>(j) < m) result.row_to_col[i] = j;
  }
  return result;
}

}  // namespace pgmatch::detail
