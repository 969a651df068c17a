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

#ifndef REFMATCH_MECHANISMS_HPP_
#define REFMATCH_MECHANISMS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "refmatch/cmrv.hpp"
#include "refmatch/model.hpp"

namespace refmatch {

// What CRSD does with families whose whole list was refused.
enum class IncompleteMode {
  Strict,                     // raise StrictIncompleteUnmatched
  GovernmentOptimalFallback,  // place them by a final pinned assignment solve
};

struct MechanismConfig {
  Alpha alpha{1.0};
  // Used by CRV; defaults to v(k) = 1/k over the instance's locations.
  std::optional<RankValueFunction> rank_value;
  // Determines the CRSD picking order.
  std::uint64_t seed = 0;
  IncompleteMode incomplete_mode = IncompleteMode::GovernmentOptimalFallback;
  SolveLimits limits;
};

// Uniformly random permutation of 0..n-1 drawn from `seed`.
std::vector<FamilyId> picking_order(int num_families, std::uint64_t seed);

// Constrained random serial dictatorship. Families pick in the order drawn
// from cfg.seed; a pick of location j is granted only if j still has room and
// some completion of the picks so far keeps z >= alpha * z*. A refused
// location is dropped from the family's list for good.
Matching run_crsd(const Instance& inst, const MechanismConfig& cfg);

// Same with an explicit picking order.
Matching run_crsd_ordered(const Instance& inst, Alpha alpha,
                          std::span<const FamilyId> order,
                          IncompleteMode mode = IncompleteMode::GovernmentOptimalFallback);

// Constrained rank value: the welfare-maximal matching with
// z >= alpha * z*. Propagates LimitExceededError from the solver.
Matching run_crv(const Instance& inst, const MechanismConfig& cfg);

// Capacitated top trading cycles. Locations prioritize families by pi
// (descending, ties to the lower id). Requires complete preferences.
Matching run_ttc(const Instance& inst);

// Family-proposing deferred acceptance with the same priorities.
// Requires complete preferences.
Matching run_da(const Instance& inst);

// The government-optimal matching (solve_assignment without pins).
Matching run_government_optimal(const Instance& inst);

enum class Mechanism { Crsd, Crv, Ttc, Da, GovOpt };

std::string_view to_string(Mechanism mech);
// Accepts "crsd", "crv", "ttc", "da", "gov-opt".
std::optional<Mechanism> parse_mechanism(std::string_view name);

Matching run_mechanism(Mechanism mech, const Instance& inst,
                       const MechanismConfig& cfg);

}  // namespace refmatch

#endif  // REFMATCH_MECHANISMS_HPP_
