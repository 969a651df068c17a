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

#include "refmatch/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace refmatch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::InfeasiblePins: return "InfeasiblePins";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::StrictIncompleteUnmatched: return "StrictIncompleteUnmatched";
    case ErrorCode::IncompletePreferences: return "IncompletePreferences";
    case ErrorCode::InfeasibleMatching: return "InfeasibleMatching";
    case ErrorCode::MalformedMatching: return "MalformedMatching";
    case ErrorCode::InvalidKnapsack: return "InvalidKnapsack";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Instance make_instance(Matrix pi, std::vector<int> quotas,
                       std::vector<std::vector<LocationId>> preferences,
                       QuotaMode mode) {
  Instance inst;
  inst.pi = std::move(pi);
  inst.quotas = std::move(quotas);
  inst.preferences = std::move(preferences);
  inst.quota_mode = mode;
  for (int i = 0; i < inst.num_families(); ++i) {
    inst.family_labels.push_back(std::to_string(i));
  }
  for (int j = 0; j < inst.num_locations(); ++j) {
    inst.location_labels.push_back("L" + std::to_string(j));
  }
  return inst;
}

Matching Matching::from_vector(const std::vector<int>& locations) {
  Matching mu(static_cast<int>(locations.size()));
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (locations[i] >= 0) mu.assignment[i] = locations[i];
  }
  return mu;
}

RankValueFunction::RankValueFunction(std::vector<double> values)
    : values_(std::move(values)) {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!(values_[k] >= 0.0 && values_[k] <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "rank value outside [0, 1] at position " +
                      std::to_string(k + 1));
    }
    if (k > 0 && values_[k] > values_[k - 1]) {
      throw Error(ErrorCode::InvalidArgument,
                  "rank value function is not monotonically decreasing at "
                  "position " + std::to_string(k + 1));
    }
  }
}

RankValueFunction RankValueFunction::inverse(int num_locations) {
  std::vector<double> values(num_locations);
  for (int k = 1; k <= num_locations; ++k) values[k - 1] = 1.0 / k;
  return RankValueFunction(std::move(values));
}

Alpha::Alpha(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  }
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto& v = report.violations;
  const int n = inst.num_families();
  const int m = inst.num_locations();

  if (static_cast<int>(inst.quotas.size()) != m) {
    v.push_back("quota count does not match location count");
  }
  if (static_cast<int>(inst.preferences.size()) != n) {
    v.push_back("preference list count does not match family count");
  }
  if (!inst.family_labels.empty() &&
      static_cast<int>(inst.family_labels.size()) != n) {
    v.push_back("family label count does not match family count");
  }
  if (!inst.location_labels.empty() &&
      static_cast<int>(inst.location_labels.size()) != m) {
    v.push_back("location label count does not match location count");
  }
  long quota_sum = 0;
  for (int q : inst.quotas) {
    if (q < 0) v.push_back("negative quota");
    quota_sum += q;
  }
  if (inst.quota_mode == QuotaMode::Exact && quota_sum != n) {
    v.push_back("quota sum mismatch: sum of quotas is " +
                std::to_string(quota_sum) + " but there are " +
                std::to_string(n) + " families");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double p = inst.pi(i, j);
      if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream os;
        os << "pi out of range at (" << i << ", " << j << "): " << p;
        v.push_back(os.str());
      }
    }
  }
  for (std::size_t i = 0; i < inst.preferences.size(); ++i) {
    std::vector<char> seen(std::max(m, 0), 0);
    for (LocationId j : inst.preferences[i]) {
      if (j < 0 || j >= m) {
        v.push_back("preference list of family " + std::to_string(i) +
                    " names an invalid location");
        break;
      }
      if (seen[j]) {
        v.push_back("preference list of family " + std::to_string(i) +
                    " repeats a location");
        break;
      }
      seen[j] = 1;
    }
  }
  return report;
}

void require_valid(const Instance& inst) {
  const ValidationReport report = validate_instance(inst);
  if (report.ok()) return;
  std::string msg = "invalid instance:";
  for (const auto& s : report.violations) msg += "\n  " + s;
  throw Error(ErrorCode::InvalidInstance, msg);
}

bool has_complete_preferences(const Instance& inst) {
  return std::all_of(inst.preferences.begin(), inst.preferences.end(),
                     [&](const auto& list) {
                       return static_cast<int>(list.size()) ==
                              inst.num_locations();
                     });
}

double government_objective(const Instance& inst, const Matching& mu) {
  double z = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    if (mu[i]) z += inst.pi(i, *mu[i]);
  }
  return z;
}

std::optional<int> rank_of(const Instance& inst, FamilyId family,
                           LocationId loc) {
  const auto& list = inst.preferences[family];
  const auto it = std::find(list.begin(), list.end(), loc);
  if (it == list.end()) return std::nullopt;
  return static_cast<int>(it - list.begin()) + 1;
}

IntMatrix rank_matrix(const Instance& inst) {
  IntMatrix ranks = IntMatrix::Zero(inst.num_families(), inst.num_locations());
  for (int i = 0; i < inst.num_families(); ++i) {
    const auto& list = inst.preferences[i];
    for (std::size_t k = 0; k < list.size(); ++k) {
      ranks(i, list[k]) = static_cast<int>(k) + 1;
    }
  }
  return ranks;
}

Matrix rank_value_weights(const Instance& inst, const RankValueFunction& v) {
  Matrix w = Matrix::Zero(inst.num_families(), inst.num_locations());
  for (int i = 0; i < inst.num_families(); ++i) {
    const auto& list = inst.preferences[i];
    for (std::size_t k = 0; k < list.size(); ++k) {
      w(i, list[k]) = v(static_cast<int>(k) + 1);
    }
  }
  return w;
}

double rank_value_welfare(const Instance& inst, const RankValueFunction& v,
                          const Matching& mu) {
  double welfare = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    if (!mu[i]) continue;
    if (auto r = rank_of(inst, i, *mu[i])) welfare += v(*r);
  }
  return welfare;
}

std::vector<int> location_loads(const Instance& inst, const Matching& mu) {
  std::vector<int> loads(inst.num_locations(), 0);
  for (const auto& a : mu.assignment) {
    if (a && *a >= 0 && *a < inst.num_locations()) ++loads[*a];
  }
  return loads;
}

int required_assigned(const Instance& inst) {
  if (inst.quota_mode == QuotaMode::Exact) return inst.num_families();
  const long total = std::accumulate(inst.quotas.begin(), inst.quotas.end(), 0L);
  return static_cast<int>(std::min<long>(total, inst.num_families()));
}

std::optional<std::string> feasibility_violation(const Instance& inst,
                                                 const Matching& mu) {
  if (mu.size() != inst.num_families()) {
    return "matching covers " + std::to_string(mu.size()) +
           " families, instance has " + std::to_string(inst.num_families());
  }
  int assigned = 0;
  for (int i = 0; i < mu.size(); ++i) {
    if (!mu[i]) continue;
    if (*mu[i] < 0 || *mu[i] >= inst.num_locations()) {
      return "family " + std::to_string(i) + " assigned to invalid location";
    }
    ++assigned;
  }
  const auto loads = location_loads(inst, mu);
  for (int j = 0; j < inst.num_locations(); ++j) {
    if (inst.quota_mode == QuotaMode::Exact && loads[j] != inst.quotas[j]) {
      return "location " + std::to_string(j) + " hosts " +
             std::to_string(loads[j]) + " families, quota is " +
             std::to_string(inst.quotas[j]);
    }
    if (inst.quota_mode == QuotaMode::UpperBound && loads[j] > inst.quotas[j]) {
      return "location " + std::to_string(j) + " exceeds its capacity";
    }
  }
  if (assigned != required_assigned(inst)) {
    return std::to_string(assigned) + " families assigned, expected " +
           std::to_string(required_assigned(inst));
  }
  return std::nullopt;
}

}  // namespace refmatch
