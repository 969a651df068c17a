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

#include "refmatch/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace refmatch {

using Json = nlohmann::ordered_json;

namespace {

bool default_family_labels(const Instance& inst) {
  for (int i = 0; i < static_cast<int>(inst.family_labels.size()); ++i) {
    if (inst.family_labels[i] != std::to_string(i)) return false;
  }
  return true;
}

std::map<std::string, int> index_labels(const std::vector<std::string>& labels,
                                        const char* what) {
  std::map<std::string, int> index;
  for (int k = 0; k < static_cast<int>(labels.size()); ++k) {
    if (!index.emplace(labels[k], k).second) {
      throw Error(ErrorCode::Parse,
                  std::string("duplicate ") + what + " label '" + labels[k] + "'");
    }
  }
  return index;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string instance_to_json(const Instance& inst) {
  Json j;
  if (default_family_labels(inst)) {
    j["families"] = inst.num_families();
  } else {
    j["families"] = inst.family_labels;
  }
  Json locations = Json::array();
  for (int k = 0; k < inst.num_locations(); ++k) {
    locations.push_back({{"label", inst.location_labels[k]},
                         {"quota", inst.quotas[k]}});
  }
  j["locations"] = std::move(locations);
  j["quota_mode"] =
      inst.quota_mode == QuotaMode::Exact ? "exact" : "upper_bound";
  Json pi = Json::array();
  for (int i = 0; i < inst.num_families(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < inst.num_locations(); ++k) row.push_back(inst.pi(i, k));
    pi.push_back(std::move(row));
  }
  j["pi"] = std::move(pi);
  Json prefs = Json::array();
  for (const auto& list : inst.preferences) {
    Json row = Json::array();
    for (LocationId loc : list) row.push_back(inst.location_labels[loc]);
    prefs.push_back(std::move(row));
  }
  j["preferences"] = std::move(prefs);
  return j.dump(1) + "\n";
}

Instance instance_from_json(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    Instance inst;
    const auto& fam = j.at("families");
    if (fam.is_number_integer()) {
      const int n = fam.get<int>();
      if (n < 0) throw Error(ErrorCode::Parse, "negative family count");
      for (int i = 0; i < n; ++i) inst.family_labels.push_back(std::to_string(i));
    } else {
      inst.family_labels = fam.get<std::vector<std::string>>();
    }
    index_labels(inst.family_labels, "family");
    for (const auto& loc : j.at("locations")) {
      inst.location_labels.push_back(loc.at("label").get<std::string>());
      inst.quotas.push_back(loc.at("quota").get<int>());
    }
    const auto loc_index = index_labels(inst.location_labels, "location");
    const std::string mode = j.value("quota_mode", std::string("exact"));
    if (mode == "exact") {
      inst.quota_mode = QuotaMode::Exact;
    } else if (mode == "upper_bound") {
      inst.quota_mode = QuotaMode::UpperBound;
    } else {
      throw Error(ErrorCode::Parse, "unknown quota_mode '" + mode + "'");
    }
    const int n = static_cast<int>(inst.family_labels.size());
    const int m = static_cast<int>(inst.location_labels.size());
    const auto& pi = j.at("pi");
    if (static_cast<int>(pi.size()) != n) {
      throw Error(ErrorCode::Parse, "pi must have one row per family");
    }
    inst.pi.resize(n, m);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(pi[i].size()) != m) {
        throw Error(ErrorCode::Parse, "pi row " + std::to_string(i) +
                                          " must have one entry per location");
      }
      for (int k = 0; k < m; ++k) inst.pi(i, k) = pi[i][k].get<double>();
    }
    const auto& prefs = j.at("preferences");
    if (static_cast<int>(prefs.size()) != n) {
      throw Error(ErrorCode::Parse, "preferences must have one list per family");
    }
    for (const auto& list : prefs) {
      std::vector<LocationId> ids;
      for (const auto& label : list) {
        const auto it = loc_index.find(label.get<std::string>());
        if (it == loc_index.end()) {
          throw Error(ErrorCode::Parse, "unknown location label '" +
                                            label.get<std::string>() + "'");
        }
        ids.push_back(it->second);
      }
      inst.preferences.push_back(std::move(ids));
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("instance JSON: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Instance read_instance(const std::filesystem::path& path) {
  return instance_from_json(read_text(path));
}

void write_instance(const std::filesystem::path& path, const Instance& inst) {
  write_text(path, instance_to_json(inst));
}

std::string matching_to_json(const Instance& inst, const Matching& mu) {
  Json j = Json::object();
  for (int i = 0; i < mu.size(); ++i) {
    if (mu[i]) {
      j[inst.family_labels[i]] = inst.location_labels[*mu[i]];
    } else {
      j[inst.family_labels[i]] = nullptr;
    }
  }
  return j.dump(1) + "\n";
}

Matching matching_from_json(const Instance& inst, const std::string& text) {
  try {
    const Json j = Json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::Parse, "matching must be an object");
    const auto fam = index_labels(inst.family_labels, "family");
    const auto loc = index_labels(inst.location_labels, "location");
    Matching mu(inst.num_families());
    for (const auto& [key, value] : j.items()) {
      const auto f = fam.find(key);
      if (f == fam.end()) {
        throw Error(ErrorCode::Parse, "unknown family label '" + key + "'");
      }
      if (value.is_null()) continue;
      const auto l = loc.find(value.get<std::string>());
      if (l == loc.end()) {
        throw Error(ErrorCode::Parse, "unknown location label '" +
                                          value.get<std::string>() + "'");
      }
      mu[f->second] = l->second;
    }
    return mu;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("matching JSON: ") + e.what());
  }
}

RankValueFunction read_rank_value(const std::filesystem::path& path) {
  try {
    return RankValueFunction(
        Json::parse(read_text(path)).get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("rank value file: ") + e.what());
  }
}

MetricsRow make_metrics_row(std::string mechanism, double alpha,
                            std::uint64_t seed, int replication,
                            const MetricsReport& report, double z_star) {
  MetricsRow row;
  row.mechanism = std::move(mechanism);
  row.alpha = alpha;
  row.seed = seed;
  row.replication = replication;
  row.z = report.z;
  row.z_star = z_star;
  row.z_ratio = z_star > 0.0 ? report.z / z_star : 1.0;
  row.rho = report.rho;
  row.tau = report.tau;
  row.cumulative = report.cumulative;
  return row;
}

std::string metrics_csv_header(int num_locations) {
  std::string h = "mechanism,alpha,seed,replication,z,z_star,z_ratio,rho,tau";
  for (int k = 1; k <= num_locations; ++k) h += ",Delta_" + std::to_string(k);
  return h;
}

std::string metrics_csv_line(const MetricsRow& row) {
  std::string s = row.mechanism + ',' + format_double(row.alpha) + ',' +
                  std::to_string(row.seed) + ',' +
                  std::to_string(row.replication) + ',' + format_double(row.z) +
                  ',' + format_double(row.z_star) + ',' +
                  format_double(row.z_ratio) + ',' +
                  (row.rho ? format_double(*row.rho) : std::string()) + ',' +
                  std::to_string(row.tau);
  for (int c : row.cumulative) s += ',' + std::to_string(c);
  return s;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, int line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) +
                                      ": bad number '" + s + "'");
  }
  return value;
}

}  // namespace

std::vector<MetricsRow> parse_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "empty CSV");
  const auto header = split(line);
  const int fixed = 9;
  if (static_cast<int>(header.size()) < fixed ||
      line.rfind(metrics_csv_header(0), 0) != 0) {
    throw Error(ErrorCode::Parse, "unexpected CSV header");
  }
  const int num_locations = static_cast<int>(header.size()) - fixed;
  if (line != metrics_csv_header(num_locations)) {
    throw Error(ErrorCode::Parse, "unexpected CSV header");
  }
  std::vector<MetricsRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (static_cast<int>(cells.size()) != fixed + num_locations) {
      throw Error(ErrorCode::Parse,
                  "line " + std::to_string(line_no) + ": wrong column count");
    }
    MetricsRow row;
    row.mechanism = cells[0];
    row.alpha = parse_number<double>(cells[1], line_no);
    row.seed = parse_number<std::uint64_t>(cells[2], line_no);
    row.replication = parse_number<int>(cells[3], line_no);
    row.z = parse_number<double>(cells[4], line_no);
    row.z_star = parse_number<double>(cells[5], line_no);
    row.z_ratio = parse_number<double>(cells[6], line_no);
    if (!cells[7].empty()) row.rho = parse_number<double>(cells[7], line_no);
    row.tau = parse_number<int>(cells[8], line_no);
    for (int k = 0; k < num_locations; ++k) {
      row.cumulative.push_back(parse_number<int>(cells[fixed + k], line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace refmatch
