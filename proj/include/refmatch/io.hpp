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

// File formats.
//
// Instance JSON:
//   {
//     "families": 100 | ["a", "b", ...],
//     "locations": [{"label": "L0", "quota": 9}, ...],
//     "quota_mode": "exact" | "upper_bound",
//     "pi": [[...], ...],                 // row-major, families x locations
//     "preferences": [["L3", "L0"], ...]  // location labels, best first
//   }
// An integer "families" means the labels are "0", "1", ...
//
// Matching JSON: {"<family label>": "<location label>" | null, ...} in
// family order.
//
// Metrics CSV: header
//   mechanism,alpha,seed,replication,z,z_star,z_ratio,rho,tau,Delta_1,...,Delta_L
// one row per run; rho is empty when undefined.

#ifndef REFMATCH_IO_HPP_
#define REFMATCH_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "refmatch/metrics.hpp"
#include "refmatch/model.hpp"

namespace refmatch {

// Parsing throws Error(Parse); file access throws Error(Io).
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
Instance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const Instance& inst);

std::string matching_to_json(const Instance& inst, const Matching& mu);
Matching matching_from_json(const Instance& inst, const std::string& text);

// A JSON array of numbers.
RankValueFunction read_rank_value(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

struct MetricsRow {
  std::string mechanism;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  int replication = 0;
  double z = 0.0;
  double z_star = 0.0;
  double z_ratio = 0.0;
  std::optional<double> rho;
  int tau = 0;
  std::vector<int> cumulative;  // Delta_1..Delta_L
};

MetricsRow make_metrics_row(std::string mechanism, double alpha,
                            std::uint64_t seed, int replication,
                            const MetricsReport& report, double z_star);

std::string metrics_csv_header(int num_locations);
std::string metrics_csv_line(const MetricsRow& row);
// Throws Error(Parse) on a malformed header or row.
std::vector<MetricsRow> parse_metrics_csv(std::istream& in);

// Shortest decimal form that round-trips.
std::string format_double(double x);

}  // namespace refmatch

#endif  // REFMATCH_IO_HPP_
