// ssleval/assignment.hpp

// Copyright 2026  ssleval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "ssleval/error.hpp"
#include "ssleval/matrix.hpp"

namespace ssleval {

/// Result of a linear assignment: row_to_col[r] is the column given to row
/// r, or -1 when there are more rows than columns and r is left out.
struct Assignment {
  std::vector<int> row_to_col;
  double value = 0.0;
};

namespace detail {

// Shortest augmenting path Hungarian method with potentials, rows <= cols.
// O(rows^2 * cols).
inline std::vector<int> hungarian_wide(const Matrix<double>& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
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
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  return row_to_col;
}

}  // namespace detail

/// Minimum-cost assignment on a rectangular matrix of finite costs.
inline Assignment solve_min_assignment(const Matrix<double>& cost) {
  for (double c : cost.data())
    if (!std::isfinite(c)) throw InvalidArgument("assignment costs must be finite");
  Assignment out;
  if (cost.rows() == 0 || cost.cols() == 0) {
    out.row_to_col.assign(cost.rows(), -1);
    return out;
  }
  if (cost.rows() <= cost.cols()) {
    out.row_to_col = detail::hungarian_wide(cost);
  } else {
    Matrix<double> t(cost.cols(), cost.rows());
    for (std::size_t r = 0; r < cost.rows(); ++r)
      for (std::size_t c = 0; c < cost.cols(); ++c) t(c, r) = cost(r, c);
    const auto col_to_row = detail::hungarian_wide(t);
    out.row_to_col.assign(cost.rows(), -1);
    for (std::size_t c = 0; c < col_to_row.size(); ++c)
      out.row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<int>(c);
  }
  for (std::size_t r = 0; r < out.row_to_col.size(); ++r)
    if (out.row_to_col[r] >= 0) out.value += cost(r, static_cast<std::size_t>(out.row_to_col[r]));
  return out;
}

/// Maximum-total-gain assignment.
inline Assignment solve_max_assignment(const Matrix<double>& gain) {
  Matrix<double> cost(gain.rows(), gain.cols());
  for (std::size_t i = 0; i < gain.data().size(); ++i) cost.data()[i] = -gain.data()[i];
  Assignment out = solve_min_assignment(cost);
  out.value = -out.value;
  return out;
}

}  // namespace ssleval
