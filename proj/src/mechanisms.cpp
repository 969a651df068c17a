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

#include "refmatch/mechanisms.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "refmatch/assignment.hpp"
#include "refmatch/random.hpp"

namespace refmatch {

std::vector<FamilyId> picking_order(int num_families, std::uint64_t seed) {
  std::vector<FamilyId> order(num_families);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  return order;
}

Matching run_crsd(const Instance& inst, const MechanismConfig& cfg) {
  const auto order = picking_order(inst.num_families(), cfg.seed);
  return run_crsd_ordered(inst, cfg.alpha, order, cfg.incomplete_mode);
}

Matching run_crsd_ordered(const Instance& inst, Alpha alpha,
                          std::span<const FamilyId> order,
                          IncompleteMode mode) {
  require_valid(inst);
  const int n = inst.num_families();
  if (static_cast<int>(order.size()) != n) {
    throw Error(ErrorCode::InvalidArgument, "picking order must list every family");
  }
  const double z_star = detail::assignment_value_unchecked(inst, {});
  const double threshold = alpha.value() * z_star - kTolerance;

  Matching mu(n);
  PinnedSet pins;
  std::vector<int> load(inst.num_locations(), 0);
  int placed = 0;
  for (FamilyId i : order) {
    // Every location is tried at most once; a refusal is permanent because
    // later picks only add pins.
    for (LocationId j : inst.preferences[i]) {
      if (load[j] >= inst.quotas[j]) continue;
      PinnedSet trial = pins;
      trial.add(i, j);
      if (detail::assignment_value_unchecked(inst, trial) >= threshold) {
        pins = std::move(trial);
        mu[i] = j;
        ++load[j];
        ++placed;
        break;
      }
    }
  }
  if (placed < required_assigned(inst)) {
    if (mode == IncompleteMode::Strict) {
      throw Error(ErrorCode::StrictIncompleteUnmatched,
                  std::to_string(required_assigned(inst) - placed) +
                      " families exhausted their lists without a placement");
    }
    return solve_assignment(inst, pins).matching;
  }
  return mu;
}

Matching run_crv(const Instance& inst, const MechanismConfig& cfg) {
  require_valid(inst);
  const double z_star = detail::assignment_value_unchecked(inst, {});
  CmrvProblem prob{inst,
                   cfg.rank_value ? *cfg.rank_value
                                  : RankValueFunction::inverse(inst.num_locations()),
                   cfg.alpha.value() * z_star};
  const CmrvSolution sol = solve_cmrv(prob, cfg.limits);
  if (sol.status != CmrvStatus::Optimal) {
    // gamma <= z* always admits the government-optimal matching.
    throw Error(ErrorCode::InvalidInstance, "no matching reaches alpha * z*");
  }
  return sol.matching;
}

namespace {

void require_complete(const Instance& inst) {
  require_valid(inst);
  if (!has_complete_preferences(inst)) {
    throw Error(ErrorCode::IncompletePreferences,
                "this mechanism needs every family to rank every location");
  }
}

// priority[j] lists all families, best priority first.
std::vector<std::vector<FamilyId>> location_priorities(const Instance& inst) {
  std::vector<std::vector<FamilyId>> priority(inst.num_locations());
  for (int j = 0; j < inst.num_locations(); ++j) {
    auto& list = priority[j];
    list.resize(inst.num_families());
    std::iota(list.begin(), list.end(), 0);
    std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
      return inst.pi(a, j) > inst.pi(b, j);
    });
  }
  return priority;
}

}  // namespace

Matching run_ttc(const Instance& inst) {
  require_complete(inst);
  const int n = inst.num_families();
  const int m = inst.num_locations();
  const auto priority = location_priorities(inst);
  std::vector<int> capacity = inst.quotas;
  std::vector<std::size_t> family_ptr(n, 0), location_ptr(m, 0);
  std::vector<char> active(n, 1);
  std::vector<LocationId> points_to_location(n, -1);
  std::vector<FamilyId> points_to_family(m, -1);
  Matching mu(n);

  for (;;) {
    bool any = false;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const auto& list = inst.preferences[i];
      while (family_ptr[i] < list.size() && capacity[list[family_ptr[i]]] == 0) {
        ++family_ptr[i];
      }
      if (family_ptr[i] == list.size()) {
        active[i] = 0;  // every location is full
        continue;
      }
      points_to_location[i] = list[family_ptr[i]];
      any = true;
    }
    if (!any) break;
    for (int j = 0; j < m; ++j) {
      points_to_family[j] = -1;
      if (capacity[j] == 0) continue;
      while (location_ptr[j] < priority[j].size() &&
             !active[priority[j][location_ptr[j]]]) {
        ++location_ptr[j];
      }
      if (location_ptr[j] < priority[j].size()) {
        points_to_family[j] = priority[j][location_ptr[j]];
      }
    }
    // Every active family points to a location with room, and each such
    // location points to an active family, so at least one cycle exists.
    std::vector<char> state(n, 0);  // 0 new, 1 on current walk, 2 finished
    std::vector<FamilyId> walk;
    std::vector<FamilyId> trading;
    for (int start = 0; start < n; ++start) {
      if (!active[start] || state[start]) continue;
      walk.clear();
      int cur = start;
      while (state[cur] == 0) {
        state[cur] = 1;
        walk.push_back(cur);
        cur = points_to_family[points_to_location[cur]];
      }
      if (state[cur] == 1) {
        auto it = std::find(walk.begin(), walk.end(), cur);
        trading.insert(trading.end(), it, walk.end());
      }
      for (int f : walk) state[f] = 2;
    }
    for (int i : trading) {
      const int j = points_to_location[i];
      mu[i] = j;
      --capacity[j];
      active[i] = 0;
    }
  }
  return mu;
}

Matching run_da(const Instance& inst) {
  require_complete(inst);
  const int n = inst.num_families();
  const int m = inst.num_locations();
  auto prefers = [&](int j, int a, int b) {  // location j ranks a above b
    if (inst.pi(a, j) != inst.pi(b, j)) return inst.pi(a, j) > inst.pi(b, j);
    return a < b;
  };
  std::vector<std::vector<FamilyId>> held(m);
  std::vector<std::size_t> next(n, 0);
  std::deque<FamilyId> free;
  for (int i = 0; i < n; ++i) free.push_back(i);
  while (!free.empty()) {
    const int i = free.front();
    free.pop_front();
    const auto& list = inst.preferences[i];
    if (next[i] == list.size()) continue;  // rejected everywhere
    const int j = list[next[i]++];
    auto& h = held[j];
    h.push_back(i);
    if (static_cast<int>(h.size()) > inst.quotas[j]) {
      auto worst = std::min_element(h.begin(), h.end(), [&](int a, int b) {
        return prefers(j, b, a);
      });
      free.push_back(*worst);
      h.erase(worst);
    }
  }
  Matching mu(n);
  for (int j = 0; j < m; ++j) {
    for (int i : held[j]) mu[i] = j;
  }
  return mu;
}

Matching run_government_optimal(const Instance& inst) {
  return solve_assignment(inst).matching;
}

std::string_view to_string(Mechanism mech) {
  switch (mech) {
    case Mechanism::Crsd: return "crsd";
    case Mechanism::Crv: return "crv";
    case Mechanism::Ttc: return "ttc";
    case Mechanism::Da: return "da";
    case Mechanism::GovOpt: return "gov-opt";
  }
  return "unknown";
}

std::optional<Mechanism> parse_mechanism(std::string_view name) {
  for (Mechanism m : {Mechanism::Crsd, Mechanism::Crv, Mechanism::Ttc,
                      Mechanism::Da, Mechanism::GovOpt}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

Matching run_mechanism(Mechanism mech, const Instance& inst,
                       const MechanismConfig& cfg) {
  switch (mech) {
    case Mechanism::Crsd: return run_crsd(inst, cfg);
    case Mechanism::Crv: return run_crv(inst, cfg);
    case Mechanism::Ttc: return run_ttc(inst);
    case Mechanism::Da: return run_da(inst);
    case Mechanism::GovOpt: return run_government_optimal(inst);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mechanism");
}

}  // namespace refmatch
