// Copyright 2026 The refmatch Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Max-weight transportation problem with unit supplies:
//
//   maximize   sum_ij w(i, j) x(i, j)
//   subject to sum_j x(i, j) = 1          for every row i
//              sum_i x(i, j) <= cap(j)    for every column j
//              x(i, j) = 0                where the pair is not allowed
//
// Rows are added one at a time along shortest augmenting paths (successive
// shortest paths with Johnson potentials). Dijkstra runs over column nodes
// only; a column that is full is expanded through every row it currently
// holds. Each augmentation costs O(rows * cols + cols^2).
//
// On success the potentials are an optimal dual pair:
//   row_dual(i) + col_dual(j) >= w(i, j) for every allowed pair,
//   col_dual(j) >= 0, and col_dual(j) == 0 whenever column j is not full.

#ifndef REFMATCH_TRANSPORT_HPP_
#define REFMATCH_TRANSPORT_HPP_

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace refmatch {

using AllowedMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct TransportSolution {
  using VectorS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  bool feasible = false;
  std::vector<int> row_to_col;
  Scalar value = Scalar(0);
  VectorS row_dual;
  VectorS col_dual;

  // u(i) + p(j) - w(i, j); nonnegative on allowed pairs, zero on used pairs.
  template <typename Derived>
  Scalar reduced_cost(const Eigen::MatrixBase<Derived>& weights, int i,
                      int j) const {
    return row_dual(i) + col_dual(j) - weights(i, j);
  }
};

template <typename Derived>
TransportSolution<typename Derived::Scalar> solve_transport(
    const Eigen::MatrixBase<Derived>& weights, std::span<const int> capacity,
    const AllowedMask* allowed = nullptr) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(weights.rows());
  const int m = static_cast<int>(weights.cols());
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  auto ok = [&](int i, int j) { return !allowed || (*allowed)(i, j); };

  TransportSolution<Scalar> sol;
  sol.row_to_col.assign(n, -1);
  // Potentials in min-cost form (cost = -w): reduced cost of the arc
  // row i -> column j is -w(i, j) + phi_row[i] - phi_col[j].
  std::vector<Scalar> phi_row(n, Scalar(0));
  std::vector<Scalar> phi_col(m, Scalar(0));
  std::vector<std::vector<int>> held(m);
  std::vector<int> load(m, 0);

  std::vector<Scalar> dist(m);
  std::vector<char> done(m);
  std::vector<int> via_row(m);
  std::vector<int> via_col(m);
  std::vector<Scalar> row_shift(n);

  for (int root = 0; root < n; ++root) {
    Scalar best = -inf;
    for (int j = 0; j < m; ++j) {
      if (ok(root, j)) best = std::max(best, phi_col[j] + weights(root, j));
    }
    if (best == -inf) return sol;
    phi_row[root] = best;

    std::fill(dist.begin(), dist.end(), inf);
    std::fill(done.begin(), done.end(), 0);
    for (int j = 0; j < m; ++j) {
      if (!ok(root, j)) continue;
      dist[j] = -weights(root, j) + phi_row[root] - phi_col[j];
      via_row[j] = root;
      via_col[j] = -1;
    }

    int end = -1;
    for (;;) {
      int j = -1;
      for (int c = 0; c < m; ++c) {
        if (!done[c] && dist[c] < inf && (j < 0 || dist[c] < dist[j])) j = c;
      }
      if (j < 0) return sol;
      done[j] = 1;
      if (load[j] < capacity[j]) {
        end = j;
        break;
      }
      for (int k : held[j]) {
        // The reverse arc column j -> row k is tight up to rounding.
        const Scalar dk = dist[j] + weights(k, j) - phi_row[k] + phi_col[j];
        for (int c = 0; c < m; ++c) {
          if (done[c] || !ok(k, c)) continue;
          const Scalar nd = dk - weights(k, c) + phi_row[k] - phi_col[c];
          if (nd < dist[c]) {
            dist[c] = nd;
            via_row[c] = k;
            via_col[c] = j;
          }
        }
      }
    }

    const Scalar reach = dist[end];
    for (int j = 0; j < m; ++j) {
      if (!done[j]) continue;
      for (int k : held[j]) {
        row_shift[k] = dist[j] + weights(k, j) - phi_row[k] + phi_col[j];
      }
    }
    for (int j = 0; j < m; ++j) {
      if (!done[j]) continue;
      for (int k : held[j]) phi_row[k] += std::min(row_shift[k], reach) - reach;
      phi_col[j] += dist[j] - reach;
    }
    phi_row[root] -= reach;

    ++load[end];
    for (int j = end;;) {
      const int k = via_row[j];
      const int from = via_col[j];
      sol.row_to_col[k] = j;
      held[j].push_back(k);
      if (from < 0) break;
      auto& src = held[from];
      src.erase(std::find(src.begin(), src.end(), k));
      j = from;
    }
  }

  sol.feasible = true;
  sol.value = Scalar(0);
  for (int i = 0; i < n; ++i) sol.value += weights(i, sol.row_to_col[i]);
  sol.row_dual.resize(n);
  sol.col_dual.resize(m);
  for (int i = 0; i < n; ++i) sol.row_dual(i) = phi_row[i];
  for (int j = 0; j < m; ++j) sol.col_dual(j) = -phi_col[j];
  return sol;
}

// Among the optimal solutions that only use pairs whose reduced cost is at
// most `tight`, moves `sol` to the lexicographically smallest row_to_col
// vector. The optimal value is preserved up to rows * tight.
template <typename Derived>
void make_lexicographically_smallest(
    const Eigen::MatrixBase<Derived>& weights, std::span<const int> capacity,
    const AllowedMask* allowed, TransportSolution<typename Derived::Scalar>& sol,
    typename Derived::Scalar tight) {
  using Scalar = typename Derived::Scalar;
  if (!sol.feasible) return;
  const int n = static_cast<int>(weights.rows());
  const int m = static_cast<int>(weights.cols());
  auto usable = [&](int i, int j) {
    return (!allowed || (*allowed)(i, j)) &&
           sol.reduced_cost(weights, i, j) <= tight;
  };

  std::vector<std::vector<int>> held(m);
  std::vector<int> load(m, 0);
  for (int i = 0; i < n; ++i) {
    held[sol.row_to_col[i]].push_back(i);
    ++load[sol.row_to_col[i]];
  }
  // A column with a positive dual must stay full.
  auto may_leave_slack = [&](int j) { return sol.col_dual(j) <= tight; };

  std::vector<int> via_row(m), via_col(m);
  std::vector<char> seen(m);
  for (int row = 0; row < n; ++row) {
    const int current = sol.row_to_col[row];
    for (int target = 0; target < current; ++target) {
      if (!usable(row, target)) continue;
      // Breadth-first search over columns for a chain of moves of rows
      // after `row` that makes room in `target` and ends either at the
      // column `row` leaves or at a column with spare capacity.
      std::fill(seen.begin(), seen.end(), 0);
      std::deque<int> queue;
      int sink = -1;
      seen[target] = 1;
      via_row[target] = -1;
      queue.push_back(target);
      while (!queue.empty() && sink < 0) {
        const int a = queue.front();
        queue.pop_front();
        if (a == current ||
            (load[a] < capacity[a] && may_leave_slack(current))) {
          sink = a;
          break;
        }
        for (int k : held[a]) {
          if (k <= row) continue;
          for (int b = 0; b < m; ++b) {
            if (seen[b] || !usable(k, b)) continue;
            seen[b] = 1;
            via_row[b] = k;
            via_col[b] = a;
            queue.push_back(b);
          }
        }
      }
      if (sink < 0) continue;
      for (int b = sink; b != target;) {
        const int k = via_row[b];
        const int a = via_col[b];
        auto& src = held[a];
        src.erase(std::find(src.begin(), src.end(), k));
        held[b].push_back(k);
        ++load[b];
        --load[a];
        sol.row_to_col[k] = b;
        b = a;
      }
      auto& src = held[current];
      src.erase(std::find(src.begin(), src.end(), row));
      --load[current];
      held[target].push_back(row);
      ++load[target];
      sol.row_to_col[row] = target;
      break;
    }
  }
  sol.value = Scalar(0);
  for (int i = 0; i < n; ++i) sol.value += weights(i, sol.row_to_col[i]);
}

}  // namespace refmatch

#endif  // REFMATCH_TRANSPORT_HPP_
