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

#include <numeric>

#include "refmatch/generator.hpp"
#include "refmatch/io.hpp"
#include "refmatch/random.hpp"

namespace refmatch {
namespace {

TEST(TypeTables, PositiveRegime) {
  const TypeTable pi = omega_pi(Regime::PositiveCorrelation);
  EXPECT_EQ(pi[0][0], 0.6);
  EXPECT_EQ(pi[0][3], 0.3);
  EXPECT_EQ(pi[1][1], 0.4);
  EXPECT_EQ(pi[2][2], 0.4);
  EXPECT_EQ(pi[3][0], 0.1);
}

TEST(TypeTables, NegativeRegime) {
  const TypeTable pi = omega_pi(Regime::NegativeCorrelation);
  EXPECT_EQ(pi[0][3], 0.6);
  EXPECT_EQ(pi[0][0], 0.3);
  EXPECT_EQ(pi[1][3], 0.4);
  EXPECT_EQ(pi[3][2], 0.2);
}

TEST(TypeTables, UtilityTableSharedByRegimes) {
  EXPECT_EQ(omega_u(Regime::PositiveCorrelation), omega_u(Regime::NegativeCorrelation));
  EXPECT_EQ(omega_u(Regime::PositiveCorrelation)[1][1], 1.0);
  EXPECT_EQ(omega_u(Regime::PositiveCorrelation)[3][0], 1.0);
  EXPECT_EQ(omega_u(Regime::PositiveCorrelation)[2][3], 0.3);
}

TEST(AllocateQuotas, StandardLayoutGolden) {
  const auto q = allocate_quotas({1, 9, 6, 10}, {4, 2, 2, 1}, 100);
  std::vector<int> expect;
  expect.push_back(9);
  expect.insert(expect.end(), 11, 5);
  expect.insert(expect.end(), 4, 4);
  expect.insert(expect.end(), 10, 2);
  EXPECT_EQ(q, expect);
  EXPECT_EQ(std::accumulate(q.begin(), q.end(), 0), 100);
}

TEST(AllocateQuotas, SingleTypeRemainderToLowIds) {
  EXPECT_EQ(allocate_quotas({3, 0, 0, 0}, {4, 2, 2, 1}, 10), (std::vector<int>{4, 3, 3}));
  EXPECT_EQ(allocate_quotas({0, 0, 0, 4}, {4, 2, 2, 1}, 6),
            (std::vector<int>{2, 2, 1, 1}));
}

TEST(AllocateQuotas, DivisibleTotal) {
  EXPECT_EQ(allocate_quotas({4, 0, 0, 0}, {1, 1, 1, 1}, 8), (std::vector<int>{2, 2, 2, 2}));
}

TEST(AllocateQuotas, SumsToTotalForAnyTotal) {
  for (int total = 1; total <= 200; ++total) {
    const auto q = allocate_quotas({1, 9, 6, 10}, {4, 2, 2, 1}, total);
    EXPECT_EQ(std::accumulate(q.begin(), q.end(), 0), total);
    for (int x : q) EXPECT_GE(x, 0);
  }
}

TEST(GenerateInstance, ShapeAndValidity) {
  for (bool truncate : {false, true}) {
    for (Regime regime : {Regime::PositiveCorrelation, Regime::NegativeCorrelation}) {
      const Instance inst = generate_instance(GeneratorSpec::standard(regime, truncate, 11));
      EXPECT_EQ(inst.num_families(), 100);
      EXPECT_EQ(inst.num_locations(), 26);
      EXPECT_TRUE(validate_instance(inst).ok());
      EXPECT_EQ(has_complete_preferences(inst), !truncate);
    }
  }
}

TEST(GenerateInstance, TypeCountsFollowGeneratorSpec) {
  const auto spec = GeneratorSpec::standard(Regime::PositiveCorrelation, false, 0);
  const auto ft = family_types(spec);
  const auto lt = location_types(spec);
  ASSERT_EQ(ft.size(), 100u);
  ASSERT_EQ(lt.size(), 26u);
  EXPECT_EQ(std::count(ft.begin(), ft.end(), 0), 15);
  EXPECT_EQ(std::count(ft.begin(), ft.end(), 3), 40);
  EXPECT_EQ(std::count(lt.begin(), lt.end(), 0), 1);
  EXPECT_EQ(std::count(lt.begin(), lt.end(), 3), 10);
}

// Per type-cell statistics over many generated instances: every draw lies
// under the table bound and the mean sits at half of it.
TEST(GenerateInstance, EmploymentDrawsMatchTables) {
  for (Regime regime : {Regime::PositiveCorrelation, Regime::NegativeCorrelation}) {
    auto spec = GeneratorSpec::standard(regime, false, 0);
    const auto ft = family_types(spec);
    const auto lt = location_types(spec);
    std::array<std::array<double, 4>, 4> sum{}, max{};
    std::array<std::array<long, 4>, 4> count{};
    for (std::uint64_t seed = 0; seed < 700; ++seed) {
      spec.seed = seed;
      const Instance inst = generate_instance(spec);
      for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 26; ++j) {
          const double x = inst.pi(i, j);
          auto& s = sum[ft[i]][lt[j]];
          s += x;
          max[ft[i]][lt[j]] = std::max(max[ft[i]][lt[j]], x);
          ++count[ft[i]][lt[j]];
        }
      }
    }
    const TypeTable bound = omega_pi(regime);
    for (int f = 0; f < 4; ++f) {
      for (int l = 0; l < 4; ++l) {
        ASSERT_GE(count[f][l], 10000);
        EXPECT_LE(max[f][l], bound[f][l]);
        EXPECT_NEAR(sum[f][l] / count[f][l], bound[f][l] / 2.0, 0.05 * bound[f][l] / 2.0);
      }
    }
  }
}

TEST(GenerateInstance, PreferencesSortedByUtility) {
  // Both regimes draw pi first with the same number of values and share the
  // utility table, so a seed yields the same lists in either regime.
  const Instance a = generate_instance(
      GeneratorSpec::standard(Regime::PositiveCorrelation, false, 5));
  const Instance b = generate_instance(
      GeneratorSpec::standard(Regime::NegativeCorrelation, false, 5));
  EXPECT_EQ(a.preferences, b.preferences);
  // Type-4 locations have the lowest utility bound, so they sit at the back.
  double front = 0.0, back = 0.0;
  for (int i = 0; i < 100; ++i) {
    front += *rank_of(a, i, 0);
    back += *rank_of(a, i, 25);
  }
  EXPECT_LT(front, back);
}

TEST(Truncation, GammaDrawMean) {
  Rng rng(123);
  double sum = 0.0;
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) {
    const double x = rng.gamma(2.0, 1.5);
    ASSERT_GT(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum / draws, 3.0, 0.05 * 3.0);
}

TEST(Truncation, ListLengthsInRange) {
  double total = 0.0;
  int lists = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = generate_instance(
        GeneratorSpec::standard(Regime::PositiveCorrelation, true, seed));
    for (const auto& list : inst.preferences) {
      EXPECT_GE(list.size(), 1u);
      EXPECT_LE(list.size(), 26u);
      total += list.size();
      ++lists;
    }
  }
  // Rounded Gamma(2, 1.5) draws, clamped below at 1.
  EXPECT_NEAR(total / lists, 3.0, 0.3);
}

TEST(Truncation, ListsArePrefixesOfCompleteOrder) {
  const Instance full = generate_instance(
      GeneratorSpec::standard(Regime::PositiveCorrelation, false, 8));
  const Instance cut = generate_instance(
      GeneratorSpec::standard(Regime::PositiveCorrelation, true, 8));
  EXPECT_EQ(full.pi, cut.pi);
  for (int i = 0; i < 100; ++i) {
    const auto& p = cut.preferences[i];
    EXPECT_TRUE(std::equal(p.begin(), p.end(), full.preferences[i].begin()));
  }
}

TEST(GenerateInstance, DeterministicPerSeed) {
  const auto spec = GeneratorSpec::standard(Regime::NegativeCorrelation, true, 77);
  EXPECT_EQ(instance_to_json(generate_instance(spec)),
            instance_to_json(generate_instance(spec)));
  auto other = spec;
  other.seed = 78;
  EXPECT_NE(instance_to_json(generate_instance(spec)),
            instance_to_json(generate_instance(other)));
}

}  // namespace
}  // namespace refmatch
