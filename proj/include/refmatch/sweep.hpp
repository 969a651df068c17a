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

#ifndef REFMATCH_SWEEP_HPP_
#define REFMATCH_SWEEP_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "refmatch/generator.hpp"
#include "refmatch/io.hpp"
#include "refmatch/mechanisms.hpp"

namespace refmatch {

struct SweepSpec {
  std::vector<Mechanism> mechanisms{Mechanism::Crsd, Mechanism::Crv,
                                    Mechanism::Ttc, Mechanism::Da,
                                    Mechanism::GovOpt};
  std::vector<double> alphas{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int replications = 20;
  // Replication r generates its instance and draws its CRSD order from
  // seed base_seed + r.
  std::uint64_t base_seed = 0;
  Regime regime = Regime::PositiveCorrelation;
  bool truncate = false;
  std::optional<RankValueFunction> rank_value;
  QuotaMode quota_mode = QuotaMode::Exact;
};

struct SweepResult {
  // Sorted by (replication, position in `mechanisms`, position in `alphas`).
  std::vector<MetricsRow> rows;
  std::vector<std::string> failures;
};

// Runs every (replication, mechanism, alpha) cell. Mechanisms that do not
// depend on alpha are run once per replication and reported for each alpha.
// A failing cell is recorded in `failures` and the sweep moves on.
// `on_row` sees each row as soon as it is produced.
SweepResult run_sweep(const SweepSpec& spec,
                      const std::function<void(const MetricsRow&)>& on_row = {});

struct SummaryRow {
  std::string mechanism;
  double alpha = 0.0;
  int count = 0;
  double z_mean = 0.0, z_sd = 0.0;
  double z_ratio_mean = 0.0, z_ratio_sd = 0.0;
  double rho_mean = 0.0, rho_sd = 0.0;  // over rows where rho is defined
  double tau_mean = 0.0, tau_sd = 0.0;
  std::vector<double> cumulative_mean;
};

// Mean and sample standard deviation per (mechanism, alpha), ordered by
// first appearance of the mechanism, then by alpha.
std::vector<SummaryRow> summarize(const std::vector<MetricsRow>& rows);

std::string summary_csv(const std::vector<SummaryRow>& summary);

// Writes the chart set for a metrics CSV into `out_dir` and returns the
// written paths: rho_vs_alpha.svg, z_vs_alpha.svg, one
// cumulative_<mechanism>.svg per alpha-dependent mechanism, and
// tau_vs_alpha.svg when some family ended outside its list.
// Throws Error(Parse) on malformed or empty input.
std::vector<std::filesystem::path> write_report(
    const std::vector<MetricsRow>& rows, const std::filesystem::path& out_dir);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Minimal standalone SVG polyline chart.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series,
                              const std::vector<double>& x_ticks);

}  // namespace refmatch

#endif  // REFMATCH_SWEEP_HPP_
