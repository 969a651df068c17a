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

#ifndef REFMATCH_METRICS_HPP_
#define REFMATCH_METRICS_HPP_

#include <optional>
#include <vector>

#include "refmatch/model.hpp"

namespace refmatch {

struct MetricsReport {
  double z = 0.0;
  // Mean rank over families placed at a location they ranked; absent when
  // no family is.
  std::optional<double> rho;
  std::vector<int> delta;  // delta[k-1]: families at their k-th choice
  std::vector<int> cumulative;  // cumulative[k-1]: k-th choice or better
  int tau = 0;  // families not placed at a ranked location
};

// Throws Error(InfeasibleMatching) when `mu` is not feasible.
MetricsReport compute_metrics(const Instance& inst, const Matching& mu);

}  // namespace refmatch

#endif  // REFMATCH_METRICS_HPP_
