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

#include "refmatch/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refmatch/random.hpp"

namespace refmatch {

TypeTable omega_pi(Regime regime) {
  if (regime == Regime::PositiveCorrelation) {
    return {{{0.6, 0.5, 0.5, 0.3},
             {0.3, 0.4, 0.2, 0.1},
             {0.3, 0.2, 0.4, 0.1},
             {0.1, 0.1, 0.1, 0.1}}};
  }
  return {{{0.3, 0.5, 0.5, 0.6},
           {0.2, 0.1, 0.3, 0.4},
           {0.2, 0.3, 0.1, 0.4},
           {0.2, 0.2, 0.2, 0.2}}};
}

// Same in both regimes.
TypeTable omega_u(Regime) {
  return {{{1.0, 0.6, 0.6, 0.3},
           {0.8, 1.0, 0.6, 0.3},
           {0.8, 0.6, 1.0, 0.3},
           {1.0, 0.6, 0.6, 0.3}}};
}

GeneratorSpec GeneratorSpec::standard(Regime regime, bool truncate,
                                      std::uint64_t seed) {
  GeneratorSpec spec;
  spec.regime = regime;
  spec.omega_pi = refmatch::omega_pi(regime);
  spec.omega_u = refmatch::omega_u(regime);
  if (truncate) spec.truncation = Truncation{};
  spec.seed = seed;
  return spec;
}

namespace {

std::vector<int> expand_types(const std::array<int, 4>& counts) {
  std::vector<int> types;
  for (int t = 0; t < 4; ++t) types.insert(types.end(), counts[t], t);
  return types;
}

}  // namespace

std::vector<int> family_types(const GeneratorSpec& spec) {
  return expand_types(spec.family_type_counts);
}

std::vector<int> location_types(const GeneratorSpec& spec) {
  return expand_types(spec.location_type_counts);
}

std::vector<int> allocate_quotas(const std::array<int, 4>& location_type_counts,
                                 const std::array<int, 4>& weights, int total) {
  const std::vector<int> types = expand_types(location_type_counts);
  const int m = static_cast<int>(types.size());
  long denominator = 0;
  for (int t : types) denominator += weights[t];
  std::vector<int> quotas(m, 0);
  if (m == 0 || denominator == 0) return quotas;

  // share_j = weight_j * total / denominator, kept as an exact fraction.
  std::vector<long> remainder(m);
  long assigned = 0;
  for (int j = 0; j < m; ++j) {
    const long numerator = static_cast<long>(weights[types[j]]) * total;
    quotas[j] = static_cast<int>(numerator / denominator);
    remainder[j] = numerator % denominator;
    assigned += quotas[j];
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (long k = 0; k < total - assigned; ++k) ++quotas[order[k]];
  return quotas;
}

Instance generate_instance(const GeneratorSpec& spec) {
  const std::vector<int> ftype = family_types(spec);
  const std::vector<int> ltype = location_types(spec);
  const int n = static_cast<int>(ftype.size());
  const int m = static_cast<int>(ltype.size());
  Rng rng(spec.seed);

  Matrix pi(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      pi(i, j) = rng.uniform(0.0, spec.omega_pi[ftype[i]][ltype[j]]);
    }
  }
  Matrix u(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      u(i, j) = rng.uniform(0.0, spec.omega_u[ftype[i]][ltype[j]]);
    }
  }

  std::vector<std::vector<LocationId>> prefs(n);
  for (int i = 0; i < n; ++i) {
    auto& list = prefs[i];
    list.resize(m);
    std::iota(list.begin(), list.end(), 0);
    std::stable_sort(list.begin(), list.end(),
                     [&](int a, int b) { return u(i, a) > u(i, b); });
  }
  if (spec.truncation) {
    for (int i = 0; i < n; ++i) {
      const double draw =
          rng.gamma(spec.truncation->gamma_shape, spec.truncation->gamma_scale);
      const long kappa = std::clamp<long>(std::lround(draw), 1, m);
      prefs[i].resize(kappa);
    }
  }
  return make_instance(std::move(pi),
                       allocate_quotas(spec.location_type_counts,
                                       spec.quota_weights, n),
                       std::move(prefs));
}

}  // namespace refmatch
