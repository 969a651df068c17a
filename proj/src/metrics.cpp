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

#include "refmatch/metrics.hpp"

namespace refmatch {

MetricsReport compute_metrics(const Instance& inst, const Matching& mu) {
  if (auto why = feasibility_violation(inst, mu)) {
    throw Error(ErrorCode::InfeasibleMatching, *why);
  }
  const int m = inst.num_locations();
  MetricsReport report;
  report.z = government_objective(inst, mu);
  report.delta.assign(m, 0);
  long rank_sum = 0;
  int ranked = 0;
  for (int i = 0; i < mu.size(); ++i) {
    if (!mu[i]) continue;
    if (auto r = rank_of(inst, i, *mu[i])) {
      ++report.delta[*r - 1];
      rank_sum += *r;
      ++ranked;
    }
  }
  report.cumulative.assign(m, 0);
  int running = 0;
  for (int k = 0; k < m; ++k) {
    running += report.delta[k];
    report.cumulative[k] = running;
  }
  report.tau = inst.num_families() - ranked;
  if (ranked > 0) report.rho = static_cast<double>(rank_sum) / ranked;
  return report;
}

}  // namespace refmatch
