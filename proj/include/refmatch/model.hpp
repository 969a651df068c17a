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

#ifndef REFMATCH_MODEL_HPP_
#define REFMATCH_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace refmatch {

using FamilyId = int;
using LocationId = int;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;

// Absolute tolerance used for every comparison of objective values.
inline constexpr double kTolerance = 1e-9;

enum class QuotaMode { Exact, UpperBound };

enum class ErrorCode {
  InvalidInstance,
  InfeasiblePins,
  LimitExceeded,
  StrictIncompleteUnmatched,
  IncompletePreferences,
  InfeasibleMatching,
  MalformedMatching,
  InvalidKnapsack,
  InvalidArgument,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Families and locations are dense 0-based indices. Labels are only kept so
// that files can be round-tripped.
struct Instance {
  std::vector<std::string> family_labels;
  std::vector<std::string> location_labels;
  std::vector<int> quotas;
  // pi(i, j): predicted probability that family i finds employment at j.
  Matrix pi;
  // preferences[i] lists the locations ranked by family i, best first.
  std::vector<std::vector<LocationId>> preferences;
  QuotaMode quota_mode = QuotaMode::Exact;

  int num_families() const { return static_cast<int>(pi.rows()); }
  int num_locations() const { return static_cast<int>(pi.cols()); }
};

// Builds an instance with default labels ("0", "1", ... for families and
// "L0", "L1", ... for locations).
Instance make_instance(Matrix pi, std::vector<int> quotas,
                       std::vector<std::vector<LocationId>> preferences,
                       QuotaMode mode = QuotaMode::Exact);

struct Matching {
  std::vector<std::optional<LocationId>> assignment;

  Matching() = default;
  explicit Matching(int num_families) : assignment(num_families) {}
  static Matching from_vector(const std::vector<int>& locations);

  int size() const { return static_cast<int>(assignment.size()); }
  const std::optional<LocationId>& operator[](FamilyId i) const {
    return assignment[i];
  }
  std::optional<LocationId>& operator[](FamilyId i) { return assignment[i]; }

  friend bool operator==(const Matching&, const Matching&) = default;
};

// Monotonically decreasing map from 1-based preference positions to [0, 1].
class RankValueFunction {
 public:
  explicit RankValueFunction(std::vector<double> values);
  // v(k) = 1 / k.
  static RankValueFunction inverse(int num_locations);

  double operator()(int rank) const { return values_.at(rank - 1); }
  int size() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

class Alpha {
 public:
  explicit Alpha(double value);
  double value() const { return value_; }

 private:
  double value_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const Instance& inst);

// Throws Error(InvalidInstance) listing every violation.
void require_valid(const Instance& inst);

bool has_complete_preferences(const Instance& inst);

// z(mu): sum of pi over assigned pairs.
double government_objective(const Instance& inst, const Matching& mu);

// 1-based position of `loc` in the family's list, or nullopt if unranked.
std::optional<int> rank_of(const Instance& inst, FamilyId family,
                           LocationId loc);

// Rank table with 0 for unranked pairs.
IntMatrix rank_matrix(const Instance& inst);

// Objective weights v(rank) per pair; unranked pairs get weight 0.
Matrix rank_value_weights(const Instance& inst, const RankValueFunction& v);

// Sum of rank values over pairs ranked by the assigned family.
double rank_value_welfare(const Instance& inst, const RankValueFunction& v,
                          const Matching& mu);

std::vector<int> location_loads(const Instance& inst, const Matching& mu);

// Number of families a feasible matching must place. Equal to |F| in Exact
// mode; in UpperBound mode it is capped by the total capacity.
int required_assigned(const Instance& inst);

// Empty when feasible, otherwise a description of the first violation.
std::optional<std::string> feasibility_violation(const Instance& inst,
                                                 const Matching& mu);

inline bool is_feasible(const Instance& inst, const Matching& mu) {
  return !feasibility_violation(inst, mu).has_value();
}

}  // namespace refmatch

#endif  // REFMATCH_MODEL_HPP_
