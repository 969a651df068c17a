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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refmatch/cmrv.hpp"

namespace refmatch {
namespace {

// Relative slack allowed on sum(a) = 1 / (4n) after floating-point scaling.
constexpr double kNormalizationSlack = 1e-12;

void check_nonnegative(const KnapsackInstance& k) {
  if (k.values.size() != k.sizes.size() || k.values.empty()) {
    throw Error(ErrorCode::InvalidKnapsack,
                "knapsack needs the same positive number of values and sizes");
  }
  auto negative = [](double x) { return !(x >= 0.0); };
  if (std::any_of(k.values.begin(), k.values.end(), negative) ||
      std::any_of(k.sizes.begin(), k.sizes.end(), negative) ||
      negative(k.capacity)) {
    throw Error(ErrorCode::InvalidKnapsack, "knapsack data must be >= 0");
  }
}

}  // namespace

NormalizedKnapsack normalize_knapsack(const KnapsackInstance& k) {
  check_nonnegative(k);
  const int n = k.size();
  const double total = std::accumulate(k.sizes.begin(), k.sizes.end(), 0.0);
  if (total <= 0.0) {
    throw Error(ErrorCode::InvalidKnapsack, "all item sizes are zero");
  }
  if (k.capacity >= total) {
    throw Error(ErrorCode::InvalidKnapsack,
                "capacity admits every item; the instance is trivial");
  }
  NormalizedKnapsack out;
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](int a, int b) { return k.values[a] > k.values[b]; });
  out.size_scale = (1.0 / (4.0 * n)) / total;
  const double top = *std::max_element(k.values.begin(), k.values.end());
  out.value_scale = top > 2.0 ? 2.0 / top : 1.0;
  for (int idx : out.order) {
    out.knapsack.values.push_back(k.values[idx] * out.value_scale);
    out.knapsack.sizes.push_back(k.sizes[idx] * out.size_scale);
  }
  out.knapsack.capacity = k.capacity * out.size_scale;
  return out;
}

CmrvProblem knapsack_to_cmrv(const KnapsackInstance& k) {
  check_nonnegative(k);
  const int n = k.size();
  const double quarter = 1.0 / (4.0 * n);
  if (!std::is_sorted(k.values.begin(), k.values.end(), std::greater<>())) {
    throw Error(ErrorCode::InvalidKnapsack, "values must be sorted descending");
  }
  if (k.values.front() > 2.0) {
    throw Error(ErrorCode::InvalidKnapsack, "values must not exceed 2");
  }
  const double total = std::accumulate(k.sizes.begin(), k.sizes.end(), 0.0);
  if (std::abs(total - quarter) > kNormalizationSlack * quarter) {
    throw Error(ErrorCode::InvalidKnapsack, "sizes must sum to 1 / (4n)");
  }
  if (!(k.capacity < quarter)) {
    throw Error(ErrorCode::InvalidKnapsack, "capacity must be below 1 / (4n)");
  }

  // Families 0..n-1 are f_1..f_n, n..2n-1 are their twins; locations follow
  // the same layout.
  Matrix pi = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    pi(i, n + i) = k.sizes[i] + quarter;
    pi(i, i) = quarter;
    pi(n + i, i) = quarter;
    pi(n + i, n + i) = quarter;
  }
  std::vector<LocationId> plain(2 * n), twin(2 * n);
  std::iota(plain.begin(), plain.end(), 0);
  for (int r = 0; r < 2 * n; ++r) twin[r] = (r + n) % (2 * n);
  std::vector<std::vector<LocationId>> prefs(2 * n);
  for (int i = 0; i < n; ++i) {
    prefs[i] = plain;
    prefs[n + i] = twin;
  }
  std::vector<double> v(2 * n, 0.0);
  for (int i = 0; i < n; ++i) v[i] = k.values[i] / 2.0;

  Instance inst = make_instance(std::move(pi), std::vector<int>(2 * n, 1),
                                std::move(prefs));
  for (int i = 0; i < n; ++i) {
    inst.family_labels[i] = "f" + std::to_string(i + 1);
    inst.family_labels[n + i] = "fbar" + std::to_string(i + 1);
    inst.location_labels[i] = "l" + std::to_string(i + 1);
    inst.location_labels[n + i] = "lbar" + std::to_string(i + 1);
  }
  const double gamma = (2.0 * n + 1.0) * quarter - k.capacity;
  return CmrvProblem{std::move(inst), RankValueFunction(std::move(v)), gamma};
}

std::vector<int> extract_induced_knapsack(const Matching& mu, int n) {
  if (n <= 0 || mu.size() != 2 * n) {
    throw Error(ErrorCode::MalformedMatching,
                "matching does not belong to a reduced instance with n = " +
                    std::to_string(n));
  }
  std::vector<int> x(n);
  for (int i = 0; i < n; ++i) {
    if (!mu[i]) {
      throw Error(ErrorCode::MalformedMatching,
                  "family f" + std::to_string(i + 1) + " is unassigned");
    }
    x[i] = *mu[i] == i ? 1 : 0;
  }
  return x;
}

}  // namespace refmatch
