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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "refmatch/cmrv.hpp"

namespace refmatch {
namespace {

struct IntegerKnapsack {
  std::vector<double> values;
  std::vector<int> sizes;
  int capacity;

  KnapsackInstance as_real() const {
    KnapsackInstance k;
    k.values = values;
    for (int s : sizes) k.sizes.push_back(s);
    k.capacity = capacity;
    return k;
  }
};

IntegerKnapsack random_knapsack(std::mt19937_64& rng, int n) {
  IntegerKnapsack k;
  std::uniform_real_distribution<double> value(0.0, 10.0);
  int total = 0;
  for (int i = 0; i < n; ++i) {
    k.values.push_back(std::round(value(rng) * 8.0) / 8.0);
    k.sizes.push_back(1 + static_cast<int>(rng() % 20));
    total += k.sizes.back();
  }
  k.capacity = static_cast<int>(rng() % total);
  return k;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

TEST(KnapsackReduction, SingleItemGamma) {
  const KnapsackInstance k{{2.0}, {0.25}, 0.125};
  const auto prob = knapsack_to_cmrv(k);
  EXPECT_EQ(prob.inst.num_families(), 2);
  EXPECT_EQ(prob.inst.num_locations(), 2);
  EXPECT_NEAR(prob.gamma, 5.0 / 8.0, 1e-15);
  // Paired family at the twin location: a_1 + 1/(4n).
  EXPECT_NEAR(prob.inst.pi(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(prob.inst.pi(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(prob.inst.pi(1, 0), 0.25, 1e-15);
  EXPECT_NEAR(prob.inst.pi(1, 1), 0.25, 1e-15);
  EXPECT_EQ(prob.v.values(), (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(prob.inst.family_labels, (std::vector<std::string>{"f1", "fbar1"}));
  EXPECT_EQ(prob.inst.location_labels, (std::vector<std::string>{"l1", "lbar1"}));
}

TEST(KnapsackReduction, BlockPreferencesAndUnitQuotas) {
  const KnapsackInstance k{{1.0, 0.5}, {0.0625, 0.0625}, 0.1};
  const auto prob = knapsack_to_cmrv(k);
  EXPECT_EQ(prob.inst.quotas, (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(prob.inst.preferences[0], (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(prob.inst.preferences[1], (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(prob.inst.preferences[2], (std::vector<int>{2, 3, 0, 1}));
  EXPECT_EQ(prob.inst.preferences[3], (std::vector<int>{2, 3, 0, 1}));
  EXPECT_EQ(prob.v.values(), (std::vector<double>{0.5, 0.25, 0.0, 0.0}));
  EXPECT_EQ(prob.inst.pi(0, 1), 0.0);
  EXPECT_NEAR(prob.gamma, 5.0 / 8.0 - 0.1, 1e-15);
}

TEST(KnapsackReduction, RejectsUnnormalizedInput) {
  EXPECT_EQ(code_of([] { knapsack_to_cmrv({{1.0, 2.0}, {0.0625, 0.0625}, 0.1}); }),
            ErrorCode::InvalidKnapsack);
  EXPECT_EQ(code_of([] { knapsack_to_cmrv({{3.0}, {0.25}, 0.1}); }),
            ErrorCode::InvalidKnapsack);
  EXPECT_EQ(code_of([] { knapsack_to_cmrv({{1.0}, {0.3}, 0.1}); }),
            ErrorCode::InvalidKnapsack);
  EXPECT_EQ(code_of([] { knapsack_to_cmrv({{1.0}, {0.25}, 0.25}); }),
            ErrorCode::InvalidKnapsack);
  EXPECT_EQ(code_of([] { normalize_knapsack({{1.0}, {0.0}, 0.0}); }),
            ErrorCode::InvalidKnapsack);
}

TEST(KnapsackReduction, NormalizationMapsOntoCanonicalForm) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto k = random_knapsack(rng, n);
    const auto norm = normalize_knapsack(k.as_real());
    double total = 0.0;
    for (double a : norm.knapsack.sizes) total += a;
    EXPECT_NEAR(total, 1.0 / (4.0 * n), 1e-15);
    EXPECT_LT(norm.knapsack.capacity, 1.0 / (4.0 * n));
    EXPECT_TRUE(std::is_sorted(norm.knapsack.values.begin(), norm.knapsack.values.end(),
                               std::greater<>()));
    EXPECT_LE(norm.knapsack.values.front(), 2.0);
    for (int i = 0; i < n; ++i) {
      EXPECT_DOUBLE_EQ(norm.knapsack.values[i],
                       k.values[norm.order[i]] * norm.value_scale);
    }
    EXPECT_NO_THROW(knapsack_to_cmrv(norm.knapsack));
  }
}

TEST(KnapsackReduction, ExtractInducedSolution) {
  EXPECT_EQ(extract_induced_knapsack(Matching::from_vector({0, 1}), 1),
            std::vector<int>{1});
  EXPECT_EQ(extract_induced_knapsack(Matching::from_vector({1, 0}), 1),
            std::vector<int>{0});
  // n = 2: f1 -> l1, f2 -> lbar2, fbar1 -> lbar1, fbar2 -> l2.
  EXPECT_EQ(extract_induced_knapsack(Matching::from_vector({0, 3, 2, 1}), 2),
            (std::vector<int>{1, 0}));
  EXPECT_EQ(code_of([] { extract_induced_knapsack(Matching::from_vector({0, 1}), 2); }),
            ErrorCode::MalformedMatching);
  EXPECT_EQ(code_of([] { extract_induced_knapsack(Matching::from_vector({-1, 1}), 1); }),
            ErrorCode::MalformedMatching);
}

// x selects items; build the matching the reduction associates with it.
Matching induced_matching(const std::vector<int>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<int> loc(2 * n);
  for (int i = 0; i < n; ++i) {
    loc[i] = x[i] ? i : n + i;
    loc[n + i] = x[i] ? n + i : i;
  }
  return Matching::from_vector(loc);
}

TEST(KnapsackReduction, FeasibilityEquivalenceOnInducedMatchings) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto k = random_knapsack(rng, n);
    const auto norm = normalize_knapsack(k.as_real());
    const auto prob = knapsack_to_cmrv(norm.knapsack);
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> x(n);
      int used = 0;
      for (int i = 0; i < n; ++i) {
        x[i] = mask >> i & 1;
        if (x[i]) used += k.sizes[norm.order[i]];
      }
      const Matching mu = induced_matching(x);
      ASSERT_TRUE(is_feasible(prob.inst, mu));
      EXPECT_EQ(extract_induced_knapsack(mu, n), x);
      const bool fits = used <= k.capacity;
      const bool meets = government_objective(prob.inst, mu) >= prob.gamma - kTolerance;
      EXPECT_EQ(fits, meets) << "trial " << t << " mask " << mask;
    }
  }
}

TEST(KnapsackReduction, SolverRecoversKnapsackOptimum) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto k = random_knapsack(rng, n);
    const auto norm = normalize_knapsack(k.as_real());
    const auto sol = solve_cmrv(knapsack_to_cmrv(norm.knapsack));
    ASSERT_EQ(sol.status, CmrvStatus::Optimal);
    const auto x = extract_induced_knapsack(sol.matching, n);
    double value = 0.0;
    int used = 0;
    for (int i = 0; i < n; ++i) {
      if (!x[i]) continue;
      value += k.values[norm.order[i]];
      used += k.sizes[norm.order[i]];
    }
    EXPECT_LE(used, k.capacity);
    EXPECT_NEAR(value, oracle::knapsack_dp(k.values, k.sizes, k.capacity), 1e-9)
        << "trial " << t;
  }
}

TEST(KnapsackReduction, EnumeratedOptimumIsInducedForSmallN) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 15; ++t) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const auto k = random_knapsack(rng, n);
    const auto norm = normalize_knapsack(k.as_real());
    const auto prob = knapsack_to_cmrv(norm.knapsack);
    const auto best = oracle::best_cmrv(prob.inst, prob.v.values(), prob.gamma);
    ASSERT_TRUE(best.has_value());
    EXPECT_NEAR(*best * 1.0,
                oracle::knapsack_dp(k.values, k.sizes, k.capacity) * norm.value_scale,
                1e-9);
  }
}

}  // namespace
}  // namespace refmatch
