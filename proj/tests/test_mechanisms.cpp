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
#include "refmatch/assignment.hpp"
#include "refmatch/generator.hpp"
#include "refmatch/mechanisms.hpp"

namespace refmatch {
namespace {

MechanismConfig config(double alpha, std::uint64_t seed = 0) {
  MechanismConfig cfg;
  cfg.alpha = Alpha(alpha);
  cfg.seed = seed;
  return cfg;
}

int true_rank(const Instance& truth, FamilyId f, const Matching& mu) {
  return oracle::scan_rank(truth.preferences[f], *mu[f]);
}

TEST(Crsd, HandTracedDenial) {
  Matrix pi(2, 2);
  pi << 0.9, 0.1, 0.8, 0.2;
  const Instance inst = make_instance(pi, {1, 1}, {{1, 0}, {1, 0}});
  const std::vector<FamilyId> order{0, 1};
  const Matching mu = run_crsd_ordered(inst, Alpha(0.9), order);
  EXPECT_EQ(mu, Matching::from_vector({0, 1}));
  EXPECT_NEAR(government_objective(inst, mu), 1.1, kTolerance);
}

TEST(Crsd, AlphaZeroIsPlainSerialDictatorship) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const Instance inst = oracle::random_small_instance(rng);
    const auto order = picking_order(inst.num_families(), t);
    const Matching mu = run_crsd(inst, config(0.0, t));
    EXPECT_EQ(oracle::to_vector(mu), oracle::plain_serial_dictatorship(inst, order));
  }
}

TEST(Crsd, UniqueGovernmentOptimumAtAlphaOne) {
  Matrix pi(3, 2);
  pi << 0.9, 0.1, 0.2, 0.7, 0.6, 0.5;
  const Instance inst = make_instance(pi, {2, 1}, {{1, 0}, {0, 1}, {1, 0}});
  const double z_star = oracle::best_z(inst);
  int optima = 0;
  std::vector<int> unique;
  oracle::for_each_feasible(inst, [&](const std::vector<int>& loc) {
    if (oracle::z_of(inst, loc) >= z_star - 1e-12) {
      ++optima;
      unique = loc;
    }
  });
  ASSERT_EQ(optima, 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_EQ(oracle::to_vector(run_crsd(inst, config(1.0, seed))), unique);
  }
}

TEST(Crsd, PicksOrderIsSeededPermutation) {
  const auto a = picking_order(50, 3);
  EXPECT_EQ(a, picking_order(50, 3));
  EXPECT_NE(a, picking_order(50, 4));
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Mechanisms, AlphaGuaranteeOnRandomInstances) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 40; ++t) {
    const Instance inst = oracle::random_small_instance(rng, {.truncate = (t % 2 == 1)});
    const double z_star = oracle::best_z(inst);
    for (int k = 0; k <= 10; ++k) {
      const double alpha = k / 10.0;
      for (Mechanism mech : {Mechanism::Crsd, Mechanism::Crv}) {
        const Matching mu = run_mechanism(mech, inst, config(alpha, t));
        ASSERT_TRUE(is_feasible(inst, mu));
        EXPECT_GE(government_objective(inst, mu), alpha * z_star - kTolerance)
            << to_string(mech) << " trial " << t << " alpha " << alpha;
      }
    }
  }
}

TEST(Mechanisms, CrvWelfareDominatesCrsd) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 40; ++t) {
    const Instance inst = oracle::random_small_instance(rng, {.truncate = (t % 2 == 0)});
    const auto v = RankValueFunction::inverse(inst.num_locations());
    for (double alpha : {0.0, 0.5, 0.8, 0.95, 1.0}) {
      const auto cfg = config(alpha, t);
      EXPECT_GE(rank_value_welfare(inst, v, run_crv(inst, cfg)),
                rank_value_welfare(inst, v, run_crsd(inst, cfg)) - kTolerance);
    }
  }
}

TEST(Crv, AlphaZeroMaximizesWelfare) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 30; ++t) {
    const Instance inst = oracle::random_small_instance(rng, {.truncate = true});
    const auto v = oracle::inverse_values(inst.num_locations());
    const Matching mu = run_crv(inst, config(0.0));
    EXPECT_NEAR(rank_value_welfare(inst, RankValueFunction(v), mu),
                *oracle::best_cmrv(inst, v, -1.0), kTolerance);
  }
}

TEST(Crv, AlphaOneIsBestGovernmentOptimum) {
  Matrix pi(4, 2);
  pi << 0.5, 0.5, 0.25, 0.25, 0.75, 0.25, 0.25, 0.75;
  const Instance inst = make_instance(pi, {2, 2}, {{1, 0}, {1, 0}, {1, 0}, {1, 0}});
  const double z_star = oracle::best_z(inst);
  const auto v = oracle::inverse_values(2);
  const Matching mu = run_crv(inst, config(1.0));
  EXPECT_NEAR(government_objective(inst, mu), z_star, kTolerance);
  EXPECT_NEAR(rank_value_welfare(inst, RankValueFunction(v), mu),
              *oracle::best_cmrv(inst, v, z_star), kTolerance);
}

TEST(Crv, CustomRankValueIsUsed) {
  // Family 0 only cares about its top choice under the step function.
  Matrix pi(2, 2);
  pi << 0.5, 0.5, 0.5, 0.5;
  const Instance inst = make_instance(pi, {1, 1}, {{0, 1}, {0, 1}});
  MechanismConfig cfg = config(0.0);
  cfg.rank_value = RankValueFunction({1.0, 0.0});
  const Matching mu = run_crv(inst, cfg);
  EXPECT_NEAR(rank_value_welfare(inst, *cfg.rank_value, mu), 1.0, kTolerance);
}

// Fixed-order CRSD: no family can get a location it truly prefers by
// reporting any permutation of its list.
TEST(Crsd, StrategyproofUnderFixedOrder) {
  std::mt19937_64 rng(35);
  int checked = 0;
  for (int t = 0; t < 20; ++t) {
    const Instance truth = oracle::random_small_instance(
        rng, {.min_families = 3, .max_families = 4, .min_locations = 2, .max_locations = 3});
    std::vector<FamilyId> order(truth.num_families());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (double alpha : {0.5, 0.9, 1.0}) {
      const Matching honest = run_crsd_ordered(truth, Alpha(alpha), order);
      for (FamilyId f = 0; f < truth.num_families(); ++f) {
        const int honest_rank = true_rank(truth, f, honest);
        std::vector<int> lie = truth.preferences[f];
        std::sort(lie.begin(), lie.end());
        do {
          Instance reported = truth;
          reported.preferences[f] = lie;
          const Matching mu = run_crsd_ordered(reported, Alpha(alpha), order);
          EXPECT_LE(honest_rank, true_rank(truth, f, mu))
              << "trial " << t << " family " << f << " alpha " << alpha;
          ++checked;
        } while (std::next_permutation(lie.begin(), lie.end()));
      }
    }
  }
  EXPECT_GT(checked, 0);
}

// Every nonempty ordered sublist of `list`.
std::vector<std::vector<int>> all_reports(const std::vector<int>& list) {
  std::vector<std::vector<int>> out;
  const int m = static_cast<int>(list.size());
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::vector<int> pick;
    for (int k = 0; k < m; ++k) {
      if (mask >> k & 1) pick.push_back(list[k]);
    }
    std::sort(pick.begin(), pick.end());
    do {
      out.push_back(pick);
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return out;
}

// With two locations a reordering only makes the true second choice more
// attractive to the optimizer, so the search also lets families shorten
// their lists.
TEST(Crv, ManipulableInstanceExists) {
  std::mt19937_64 rng(36);
  int found = 0;
  for (int t = 0; t < 200; ++t) {
    const Instance truth = oracle::random_small_instance(
        rng, {.min_families = 3, .max_families = 3, .min_locations = 2, .max_locations = 2});
    for (double alpha : {0.0, 0.6, 0.9}) {
      const Matching honest = run_crv(truth, config(alpha));
      for (FamilyId f = 0; f < 3; ++f) {
        for (const auto& lie : all_reports(truth.preferences[f])) {
          Instance reported = truth;
          reported.preferences[f] = lie;
          const Matching mu = run_crv(reported, config(alpha));
          EXPECT_GE(government_objective(truth, mu), alpha * oracle::best_z(truth) - kTolerance);
          if (true_rank(truth, f, mu) < true_rank(truth, f, honest)) ++found;
        }
      }
    }
  }
  EXPECT_GT(found, 0);
}

TEST(Crsd, StrictModeRaisesOnExhaustedLists) {
  Matrix pi(2, 2);
  pi << 0.5, 0.5, 0.5, 0.5;
  const Instance inst = make_instance(pi, {1, 1}, {{0}, {0}});
  MechanismConfig cfg = config(0.0);
  cfg.incomplete_mode = IncompleteMode::Strict;
  try {
    run_crsd(inst, cfg);
    FAIL() << "expected StrictIncompleteUnmatched";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StrictIncompleteUnmatched);
  }
  cfg.incomplete_mode = IncompleteMode::GovernmentOptimalFallback;
  const Matching mu = run_crsd(inst, cfg);
  EXPECT_TRUE(is_feasible(inst, mu));
}

TEST(Crsd, FallbackPlacesLeftoversGovernmentOptimally) {
  // Family 1 lists only location 0, which family 0 takes first; the fallback
  // must keep family 0's grant and put family 1 at location 1.
  Matrix pi(3, 2);
  pi << 0.5, 0.1, 0.9, 0.3, 0.2, 0.8;
  const Instance inst = make_instance(pi, {1, 2}, {{0}, {0}, {1}});
  const std::vector<FamilyId> order{0, 1, 2};
  const Matching mu = run_crsd_ordered(inst, Alpha(0.0), order);
  EXPECT_EQ(mu, Matching::from_vector({0, 1, 1}));
}

TEST(Ttc, DistinctTopChoices) {
  Matrix pi = Matrix::Constant(3, 3, 0.5);
  const Instance inst = make_instance(pi, {1, 1, 1}, {{2, 0, 1}, {0, 1, 2}, {1, 2, 0}});
  EXPECT_EQ(run_ttc(inst), Matching::from_vector({2, 0, 1}));
}

TEST(Ttc, HigherPriorityWinsContestedSeat) {
  Matrix pi(2, 2);
  pi << 0.3, 0.5, 0.6, 0.5;
  const Instance inst = make_instance(pi, {1, 1}, {{0, 1}, {0, 1}});
  EXPECT_EQ(run_ttc(inst), Matching::from_vector({1, 0}));
}

TEST(Ttc, TradesAcrossPriorities) {
  // Each family holds top priority at the other's favorite location.
  Matrix pi(2, 2);
  pi << 0.2, 0.9, 0.9, 0.2;
  const Instance inst = make_instance(pi, {1, 1}, {{0, 1}, {1, 0}});
  EXPECT_EQ(run_ttc(inst), Matching::from_vector({0, 1}));
  EXPECT_EQ(run_da(inst), Matching::from_vector({0, 1}));
}

TEST(Da, DisplacedProposerFallsBack) {
  Matrix pi(2, 2);
  pi << 0.3, 0.5, 0.6, 0.5;
  const Instance inst = make_instance(pi, {1, 1}, {{0, 1}, {0, 1}});
  EXPECT_EQ(run_da(inst), Matching::from_vector({1, 0}));
}

TEST(Da, EqualPriorityFavorsLowerId) {
  Matrix pi = Matrix::Constant(2, 2, 0.4);
  const Instance inst = make_instance(pi, {1, 1}, {{0, 1}, {0, 1}});
  EXPECT_EQ(run_da(inst), Matching::from_vector({0, 1}));
}

TEST(Benchmarks, FeasibleAndBelowOptimum) {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 50; ++t) {
    const Instance inst = oracle::random_small_instance(rng);
    const double z_star = oracle::best_z(inst);
    for (Mechanism mech : {Mechanism::Ttc, Mechanism::Da, Mechanism::GovOpt}) {
      const Matching mu = run_mechanism(mech, inst, config(1.0));
      ASSERT_TRUE(is_feasible(inst, mu)) << to_string(mech);
      EXPECT_LE(government_objective(inst, mu), z_star + kTolerance);
    }
  }
}

TEST(Benchmarks, RelabelingFamiliesPermutesOutput) {
  std::mt19937_64 rng(38);
  for (int t = 0; t < 30; ++t) {
    Instance inst = oracle::random_small_instance(rng);
    // Distinct pi values keep priorities free of id-based tie-breaks.
    for (int i = 0; i < inst.num_families(); ++i) {
      for (int j = 0; j < inst.num_locations(); ++j) inst.pi(i, j) = (rng() % 100000) / 1e5 + i * 1e-7;
    }
    std::vector<int> perm(inst.num_families());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix pi(inst.pi.rows(), inst.pi.cols());
    std::vector<std::vector<int>> prefs(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      pi.row(k) = inst.pi.row(perm[k]);
      prefs[k] = inst.preferences[perm[k]];
    }
    const Instance relabeled = make_instance(pi, inst.quotas, prefs);
    for (auto run : {&run_ttc, &run_da}) {
      const Matching a = run(inst);
      const Matching b = run(relabeled);
      for (std::size_t k = 0; k < perm.size(); ++k) EXPECT_EQ(b[k], a[perm[k]]);
    }
  }
}

TEST(Benchmarks, RejectIncompletePreferences) {
  const Instance inst = generate_instance(
      GeneratorSpec::standard(Regime::PositiveCorrelation, true, 1));
  for (auto run : {&run_ttc, &run_da}) {
    try {
      run(inst);
      FAIL() << "expected IncompletePreferences";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IncompletePreferences);
    }
  }
}

TEST(Mechanisms, Deterministic) {
  std::mt19937_64 rng(39);
  const Instance inst = oracle::random_small_instance(rng, {.min_families = 8});
  for (Mechanism mech : {Mechanism::Crsd, Mechanism::Crv, Mechanism::Ttc,
                         Mechanism::Da, Mechanism::GovOpt}) {
    EXPECT_EQ(run_mechanism(mech, inst, config(0.8, 5)),
              run_mechanism(mech, inst, config(0.8, 5)));
  }
}

TEST(Mechanisms, NameRoundTrip) {
  for (Mechanism mech : {Mechanism::Crsd, Mechanism::Crv, Mechanism::Ttc,
                         Mechanism::Da, Mechanism::GovOpt}) {
    EXPECT_EQ(parse_mechanism(to_string(mech)), mech);
  }
  EXPECT_FALSE(parse_mechanism("rsd").has_value());
}

TEST(Mechanisms, FullScaleCompleteInstance) {
  const Instance inst = generate_instance(
      GeneratorSpec::standard(Regime::PositiveCorrelation, false, 2));
  const double z_star = solve_assignment_value(inst);
  for (Mechanism mech : {Mechanism::Crsd, Mechanism::Crv}) {
    const Matching mu = run_mechanism(mech, inst, config(0.9, 2));
    ASSERT_TRUE(is_feasible(inst, mu));
    EXPECT_GE(government_objective(inst, mu), 0.9 * z_star - kTolerance);
  }
}

}  // namespace
}  // namespace refmatch
