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

#include "refmatch/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "refmatch/assignment.hpp"

namespace refmatch {
namespace {

bool depends_on_alpha(Mechanism m) {
  return m == Mechanism::Crsd || m == Mechanism::Crv;
}

struct Accumulator {
  int n = 0;
  double sum = 0.0, sum_sq = 0.0;
  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double sd() const {
    if (n < 2) return 0.0;
    const double var = (sum_sq - sum * sum / n) / (n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

SweepResult run_sweep(const SweepSpec& spec,
                      const std::function<void(const MetricsRow&)>& on_row) {
  SweepResult result;
  auto emit = [&](MetricsRow row) {
    if (on_row) on_row(row);
    result.rows.push_back(std::move(row));
  };
  for (int rep = 0; rep < spec.replications; ++rep) {
    const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(rep);
    Instance inst =
        generate_instance(GeneratorSpec::standard(spec.regime, spec.truncate, seed));
    inst.quota_mode = spec.quota_mode;
    const double z_star = solve_assignment_value(inst);
    for (Mechanism mech : spec.mechanisms) {
      const std::string name(to_string(mech));
      auto fail = [&](double alpha, const std::exception& e) {
        result.failures.push_back("replication " + std::to_string(rep) + " " +
                                  name + " alpha " + format_double(alpha) +
                                  ": " + e.what());
      };
      if (!depends_on_alpha(mech)) {
        try {
          MechanismConfig cfg;
          cfg.seed = seed;
          const MetricsReport report =
              compute_metrics(inst, run_mechanism(mech, inst, cfg));
          for (double alpha : spec.alphas) {
            emit(make_metrics_row(name, alpha, seed, rep, report, z_star));
          }
        } catch (const std::exception& e) {
          fail(spec.alphas.empty() ? 0.0 : spec.alphas.front(), e);
        }
        continue;
      }
      for (double alpha : spec.alphas) {
        try {
          MechanismConfig cfg;
          cfg.alpha = Alpha(alpha);
          cfg.seed = seed;
          cfg.rank_value = spec.rank_value;
          const MetricsReport report =
              compute_metrics(inst, run_mechanism(mech, inst, cfg));
          emit(make_metrics_row(name, alpha, seed, rep, report, z_star));
        } catch (const std::exception& e) {
          fail(alpha, e);
        }
      }
    }
  }
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<MetricsRow>& rows) {
  std::vector<std::string> mech_order;
  std::map<std::pair<std::string, double>, std::vector<const MetricsRow*>> groups;
  for (const auto& row : rows) {
    if (std::find(mech_order.begin(), mech_order.end(), row.mechanism) ==
        mech_order.end()) {
      mech_order.push_back(row.mechanism);
    }
    groups[{row.mechanism, row.alpha}].push_back(&row);
  }
  std::vector<SummaryRow> out;
  for (const auto& mech : mech_order) {
    for (const auto& [key, members] : groups) {
      if (key.first != mech) continue;
      SummaryRow s;
      s.mechanism = mech;
      s.alpha = key.second;
      s.count = static_cast<int>(members.size());
      Accumulator z, ratio, rho, tau;
      std::vector<Accumulator> cum;
      for (const MetricsRow* r : members) {
        z.add(r->z);
        ratio.add(r->z_ratio);
        if (r->rho) rho.add(*r->rho);
        tau.add(r->tau);
        if (cum.size() < r->cumulative.size()) cum.resize(r->cumulative.size());
        for (std::size_t k = 0; k < r->cumulative.size(); ++k) {
          cum[k].add(r->cumulative[k]);
        }
      }
      s.z_mean = z.mean();
      s.z_sd = z.sd();
      s.z_ratio_mean = ratio.mean();
      s.z_ratio_sd = ratio.sd();
      s.rho_mean = rho.mean();
      s.rho_sd = rho.sd();
      s.tau_mean = tau.mean();
      s.tau_sd = tau.sd();
      for (const auto& c : cum) s.cumulative_mean.push_back(c.mean());
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& summary) {
  std::string out =
      "mechanism,alpha,count,z_mean,z_sd,z_ratio_mean,z_ratio_sd,rho_mean,"
      "rho_sd,tau_mean,tau_sd,Delta_1_mean\n";
  for (const auto& s : summary) {
    out += s.mechanism + ',' + format_double(s.alpha) + ',' +
           std::to_string(s.count) + ',' + format_double(s.z_mean) + ',' +
           format_double(s.z_sd) + ',' + format_double(s.z_ratio_mean) + ',' +
           format_double(s.z_ratio_sd) + ',' + format_double(s.rho_mean) + ',' +
           format_double(s.rho_sd) + ',' + format_double(s.tau_mean) + ',' +
           format_double(s.tau_sd) + ',' +
           (s.cumulative_mean.empty() ? std::string("0")
                                      : format_double(s.cumulative_mean[0])) +
           '\n';
  }
  return out;
}

}  // namespace refmatch
