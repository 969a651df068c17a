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

#include "refmatch/assignment.hpp"

#include <numeric>
#include <ostream>

namespace refmatch {

PinnedSet PinnedSet::from_matching(const Matching& mu) {
  PinnedSet pins;
  for (int i = 0; i < mu.size(); ++i) {
    if (mu[i]) pins.add(i, *mu[i]);
  }
  return pins;
}

namespace detail {

Matrix ReducedProblem::restrict(const Matrix& full) const {
  const int rows = static_cast<int>(free_families.size());
  Matrix out = Matrix::Zero(rows, num_columns());
  for (int r = 0; r < rows; ++r) {
    out.row(r).head(full.cols()) = full.row(free_families[r]);
  }
  return out;
}

Matching ReducedProblem::to_matching(int num_families,
                                     const std::vector<int>& row_to_col,
                                     int num_locations) const {
  Matching mu(num_families);
  for (int i = 0; i < num_families; ++i) mu[i] = pinned[i];
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    const int c = row_to_col[r];
    if (c >= 0 && c < num_locations) mu[free_families[r]] = c;
  }
  return mu;
}

ReducedProblem reduce(const Instance& inst, const PinnedSet& pins,
                      const AllowedMask* forbidden) {
  const int n = inst.num_families();
  const int m = inst.num_locations();
  ReducedProblem rp;
  rp.pinned.assign(n, std::nullopt);
  std::vector<int> residual = inst.quotas;
  for (const Pin& p : pins.pins()) {
    if (p.family < 0 || p.family >= n || p.location < 0 || p.location >= m) {
      throw Error(ErrorCode::InfeasiblePins, "pin refers to an invalid id");
    }
    if (rp.pinned[p.family]) {
      throw Error(ErrorCode::InfeasiblePins,
                  "family " + std::to_string(p.family) + " is pinned twice");
    }
    if (--residual[p.location] < 0) {
      throw Error(ErrorCode::InfeasiblePins,
                  "pins exceed the quota of location " +
                      std::to_string(p.location));
    }
    rp.pinned[p.family] = p.location;
  }
  for (int i = 0; i < n; ++i) {
    if (!rp.pinned[i]) rp.free_families.push_back(i);
  }
  const int free = static_cast<int>(rp.free_families.size());
  rp.capacity = residual;
  if (inst.quota_mode == QuotaMode::UpperBound) {
    const long spare = std::accumulate(residual.begin(), residual.end(), 0L);
    if (spare < free) {
      rp.has_overflow = true;
      rp.capacity.push_back(static_cast<int>(free - spare));
    }
  }
  rp.allowed = AllowedMask::Constant(free, rp.num_columns(), true);
  if (forbidden) {
    for (int r = 0; r < free; ++r) {
      for (int j = 0; j < m; ++j) {
        if ((*forbidden)(rp.free_families[r], j)) rp.allowed(r, j) = false;
      }
    }
  }
  return rp;
}

}  // namespace detail

namespace {

double pinned_offset(const Instance& inst, const detail::ReducedProblem& rp) {
  double offset = 0.0;
  for (int i = 0; i < inst.num_families(); ++i) {
    if (rp.pinned[i]) offset += inst.pi(i, *rp.pinned[i]);
  }
  return offset;
}

}  // namespace

AssignSolution solve_assignment(const Instance& inst, const PinnedSet& pins) {
  require_valid(inst);
  const auto rp = detail::reduce(inst, pins);
  const Matrix w = rp.restrict(inst.pi);
  auto sol = solve_transport(w, rp.capacity, &rp.allowed);
  if (!sol.feasible) {
    throw Error(ErrorCode::InfeasiblePins, "no feasible completion of pins");
  }
  // Tightness threshold is scaled so that the total drift over all families
  // stays below the global tolerance.
  const double tight = kTolerance / (1.0 + inst.num_families());
  make_lexicographically_smallest(w, rp.capacity, &rp.allowed, sol, tight);
  AssignSolution out;
  out.matching =
      rp.to_matching(inst.num_families(), sol.row_to_col, inst.num_locations());
  out.objective = government_objective(inst, out.matching);
  return out;
}

double solve_assignment_value(const Instance& inst, const PinnedSet& pins) {
  require_valid(inst);
  return detail::assignment_value_unchecked(inst, pins);
}

double detail::assignment_value_unchecked(const Instance& inst,
                                          const PinnedSet& pins) {
  const auto rp = detail::reduce(inst, pins);
  const Matrix w = rp.restrict(inst.pi);
  const auto sol = solve_transport(w, rp.capacity, &rp.allowed);
  if (!sol.feasible) {
    throw Error(ErrorCode::InfeasiblePins, "no feasible completion of pins");
  }
  return pinned_offset(inst, rp) + sol.value;
}

void dump_reduced_network(std::ostream& os, const Instance& inst,
                          const PinnedSet& pins) {
  const auto rp = detail::reduce(inst, pins);
  const Matrix w = rp.restrict(inst.pi);
  os << "network " << rp.free_families.size() << ' ' << inst.num_locations()
     << ' ' << (rp.has_overflow ? 1 : 0) << " offset "
     << pinned_offset(inst, rp) << '\n';
  for (std::size_t r = 0; r < rp.free_families.size(); ++r) {
    os << "family " << r << ' ' << rp.free_families[r] << '\n';
  }
  for (int c = 0; c < rp.num_columns(); ++c) {
    os << "capacity " << c << ' ' << rp.capacity[c] << '\n';
  }
  for (int r = 0; r < w.rows(); ++r) {
    for (int c = 0; c < w.cols(); ++c) {
      if (rp.allowed(r, c)) os << "arc " << r << ' ' << c << ' ' << w(r, c) << '\n';
    }
  }
}

}  // namespace refmatch
