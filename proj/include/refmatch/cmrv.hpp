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

#ifndef REFMATCH_CMRV_HPP_
#define REFMATCH_CMRV_HPP_

#include <chrono>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "refmatch/assignment.hpp"
#include "refmatch/model.hpp"

namespace refmatch {

// Maximize rank-value welfare over feasible matchings subject to
// z(mu) >= gamma. Pairs the family did not rank carry weight 0.
struct CmrvProblem {
  Instance inst;
  RankValueFunction v;
  double gamma = 0.0;
};

enum class CmrvStatus { Optimal, Infeasible };

struct CmrvSolution {
  Matching matching;
  double welfare = 0.0;
  double z = 0.0;
  CmrvStatus status = CmrvStatus::Infeasible;
  std::size_t nodes = 0;
};

enum class NodeOutcome {
  Branched,        // bound above the incumbent; two children created
  PrunedByBound,   // bound no better than the incumbent
  Infeasible,      // no completion reaches gamma
  SolvedExactly,   // the welfare-optimal completion already reaches gamma
};

struct NodeRecord {
  std::size_t id = 0;
  int depth = 0;
  // Lagrangian upper bound on welfare inside this node (NaN when the node
  // was pruned on its parent's bound or found infeasible).
  double bound = 0.0;
  // Best welfare known after evaluating the node (-inf when none yet).
  double incumbent = 0.0;
  double lambda = 0.0;
  NodeOutcome outcome = NodeOutcome::PrunedByBound;
  std::vector<Pin> pins;
  std::vector<Pin> forbidden;
};

struct SolveLimits {
  std::size_t max_nodes = 1'000'000;
  std::optional<std::chrono::milliseconds> time_limit;
  // Called once per processed node, in processing order.
  std::function<void(const NodeRecord&)> on_node;
};

// Thrown when the node or time budget runs out before optimality is proven.
class LimitExceededError : public Error {
 public:
  LimitExceededError(const std::string& what, double incumbent,
                     double best_bound)
      : Error(ErrorCode::LimitExceeded, what),
        incumbent_(incumbent),
        best_bound_(best_bound) {}
  double incumbent() const { return incumbent_; }
  double best_bound() const { return best_bound_; }

 private:
  double incumbent_;
  double best_bound_;
};

// Exact branch-and-bound. Bounds come from the Lagrangian relaxation of the
// z >= gamma row; every relaxation is a plain assignment problem solved by
// solve_transport. Nodes are explored best-bound first, ties by creation
// order, so the result is deterministic.
CmrvSolution solve_cmrv(const CmrvProblem& prob, const SolveLimits& limits = {});

// Node trace writer producing "id,bound,incumbent,lambda" rows.
std::function<void(const NodeRecord&)> csv_node_logger(std::ostream& os);

// Knapsack reduction used to exercise the solver on hard instances.
struct KnapsackInstance {
  std::vector<double> values;  // w_i >= 0
  std::vector<double> sizes;   // a_i >= 0
  double capacity = 0.0;       // b >= 0

  int size() const { return static_cast<int>(values.size()); }
};

// A knapsack brought into the reduction's canonical form: items sorted by
// value (descending), sizes and capacity scaled so that sum(a) = 1 / (4n),
// values scaled into [0, 2] so that w_i / 2 is a valid rank value.
struct NormalizedKnapsack {
  KnapsackInstance knapsack;
  std::vector<int> order;     // order[k] = original index of sorted item k
  double size_scale = 1.0;    // normalized size = size_scale * original
  double value_scale = 1.0;   // normalized value = value_scale * original
};

// Throws Error(InvalidKnapsack) if sizes are all zero, negative numbers are
// present, or the capacity already admits every item.
NormalizedKnapsack normalize_knapsack(const KnapsackInstance& k);

// 2n families / 2n locations with unit quotas. Family f_i is index i-1 and
// its twin is index n+i-1; the same layout holds for locations.
// Throws Error(InvalidKnapsack) when `k` is not in canonical form.
CmrvProblem knapsack_to_cmrv(const KnapsackInstance& k);

// x_i = 1 iff family f_i is matched to location l_i.
// Throws Error(MalformedMatching).
std::vector<int> extract_induced_knapsack(const Matching& mu, int n);

}  // namespace refmatch

#endif  // REFMATCH_CMRV_HPP_
