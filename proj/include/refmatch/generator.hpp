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

#ifndef REFMATCH_GENERATOR_HPP_
#define REFMATCH_GENERATOR_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "refmatch/model.hpp"

namespace refmatch {

enum class Regime { PositiveCorrelation, NegativeCorrelation };

using TypeTable = std::array<std::array<double, 4>, 4>;

// Upper bounds of the uniform draws, indexed [family type][location type].
TypeTable omega_pi(Regime regime);
TypeTable omega_u(Regime regime);

struct Truncation {
  double gamma_shape = 2.0;
  double gamma_scale = 1.5;
};

// Synthetic market: four family types, four location types. pi(i, j) is
// drawn from U(0, omega_pi[type(i)][type(j)]) and the utilities behind each
// preference order from U(0, omega_u[...]).
struct GeneratorSpec {
  std::array<int, 4> family_type_counts{15, 25, 20, 40};
  std::array<int, 4> location_type_counts{1, 9, 6, 10};
  std::array<int, 4> quota_weights{4, 2, 2, 1};
  Regime regime = Regime::PositiveCorrelation;
  TypeTable omega_pi = refmatch::omega_pi(Regime::PositiveCorrelation);
  TypeTable omega_u = refmatch::omega_u(Regime::PositiveCorrelation);
  std::optional<Truncation> truncation;
  std::uint64_t seed = 0;

  // 100 families, 26 locations, tables matching `regime`.
  static GeneratorSpec standard(Regime regime, bool truncate, std::uint64_t seed);
};

// Type index (0..3) of every family / location, in id order: the first
// family_type_counts[0] families have type 0, and so on.
std::vector<int> family_types(const GeneratorSpec& spec);
std::vector<int> location_types(const GeneratorSpec& spec);

// Largest-remainder apportionment of `total` families over the locations,
// proportional to the weight of each location's type. Remainder ties go to
// the lower location id.
std::vector<int> allocate_quotas(const std::array<int, 4>& location_type_counts,
                                 const std::array<int, 4>& weights, int total);

// Draw order from one Rng seeded with spec.seed: pi row-major, then the
// utilities row-major, then one list length per family (only when
// truncating). Ties in utility are broken by ascending location id; list
// lengths are round(Gamma draw) clamped to [1, |L|].
Instance generate_instance(const GeneratorSpec& spec);

}  // namespace refmatch

#endif  // REFMATCH_GENERATOR_HPP_
