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

#ifndef REFMATCH_ASSIGNMENT_HPP_
#define REFMATCH_ASSIGNMENT_HPP_

#include <iosfwd>
#include <vector>

#include "refmatch/model.hpp"
#include "refmatch/transport.hpp"

namespace refmatch {

struct Pin {
  FamilyId family;
  LocationId location;
  friend bool operator==(const Pin&, const Pin&) = default;
};

// Family/location pairs that every returned matching must contain.
class PinnedSet {
 public:
  PinnedSet() = default;
  PinnedSet(std::initializer_list<Pin> pins) : pins_(pins) {}

  void add(FamilyId family, LocationId location) {
    pins_.push_back({family, location});
  }
  const std::vector<Pin>& pins() const { return pins_; }
  bool empty() const { return pins_.empty(); }
  std::size_t size() const { return pins_.size(); }

  // Builds the pins of every assigned family in `mu`.
  static PinnedSet from_matching(const Matching& mu);

 private:
  std::vector<Pin> pins_;
};

struct AssignSolution {
  Matching matching;
  double objective = 0.0;
};

// Government-optimal matching among those containing every pin: maximizes
// z(mu) subject to the quotas. Among co-optimal matchings the
// lexicographically smallest assignment vector is returned (unassigned
// sorts after every location).
//
// Throws Error(InvalidInstance) or Error(InfeasiblePins).
AssignSolution solve_assignment(const Instance& inst,
                                const PinnedSet& pins = {});

// Optimal value only; skips the tie-breaking pass.
double solve_assignment_value(const Instance& inst, const PinnedSet& pins = {});

// Plain-text dump of the reduced network that the solver works on:
//
//   network <free_families> <locations> <overflow 0|1> offset <value>
//   family <reduced_index> <family_id>          (one line per free family)
//   capacity <column> <residual capacity>       (one line per column)
//   arc <reduced_index> <column> <weight>       (one line per allowed pair)
//
// Column index num_locations is the overflow column (UpperBound only).
void dump_reduced_network(std::ostream& os, const Instance& inst,
                          const PinnedSet& pins = {});

namespace detail {

// The pinned families are contracted out: residual capacities shrink and
// their pi is added to a constant offset.
struct ReducedProblem {
  std::vector<FamilyId> free_families;
  std::vector<int> capacity;  // one entry per column
  AllowedMask allowed;        // free_families x columns
  bool has_overflow = false;
  std::vector<std::optional<LocationId>> pinned;  // per original family

  int num_columns() const { return static_cast<int>(capacity.size()); }

  // Copies the columns of `full` (|F| x |L|) restricted to the free families
  // and appends a zero column for overflow.
  Matrix restrict(const Matrix& full) const;

  Matching to_matching(int num_families, const std::vector<int>& row_to_col,
                       int num_locations) const;
};

// Validates pins (Error(InfeasiblePins)) and builds the reduced problem.
// `forbidden` (optional, |F| x |L|) removes pairs.
ReducedProblem reduce(const Instance& inst, const PinnedSet& pins,
                      const AllowedMask* forbidden = nullptr);

// solve_assignment_value without instance validation, for callers that
// validated once up front.
double assignment_value_unchecked(const Instance& inst, const PinnedSet& pins);

}  // namespace detail
}  // namespace refmatch

#endif  // REFMATCH_ASSIGNMENT_HPP_
