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

// refmatch: generate synthetic resettlement markets, run matching
// mechanisms, sweep the trade-off parameter and plot the results.
//
// Exit codes: 0 on success, 2 on a domain error (the first line on stderr is
// "error[<Category>]: <message>"), CLI11's codes on usage errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "refmatch/assignment.hpp"
#include "refmatch/cmrv.hpp"
#include "refmatch/generator.hpp"
#include "refmatch/io.hpp"
#include "refmatch/mechanisms.hpp"
#include "refmatch/metrics.hpp"
#include "refmatch/sweep.hpp"

namespace {

using namespace refmatch;

Regime parse_regime(const std::string& s) {
  if (s == "positive") return Regime::PositiveCorrelation;
  if (s == "negative") return Regime::NegativeCorrelation;
  throw Error(ErrorCode::InvalidArgument, "--regime must be positive or negative");
}

QuotaMode parse_quota_mode(const std::string& s) {
  if (s == "exact") return QuotaMode::Exact;
  if (s == "upper") return QuotaMode::UpperBound;
  throw Error(ErrorCode::InvalidArgument, "--quota-mode must be exact or upper");
}

std::optional<RankValueFunction> parse_rank_value(const std::string& s) {
  if (s == "inverse") return std::nullopt;
  if (s.rfind("file:", 0) == 0) return read_rank_value(s.substr(5));
  throw Error(ErrorCode::InvalidArgument,
              "--rank-value must be inverse or file:<path>");
}

Mechanism require_mechanism(const std::string& s) {
  if (auto m = parse_mechanism(s)) return *m;
  throw Error(ErrorCode::InvalidArgument,
              "unknown mechanism '" + s + "' (crsd, crv, ttc, da, gov-opt)");
}

struct GenOptions {
  std::string regime = "positive";
  bool truncate = false;
  std::uint64_t seed = 0;
  std::string out;
  std::string quota_mode = "exact";
};

int cmd_gen(const GenOptions& o) {
  Instance inst = generate_instance(
      GeneratorSpec::standard(parse_regime(o.regime), o.truncate, o.seed));
  inst.quota_mode = parse_quota_mode(o.quota_mode);
  const auto report = validate_instance(inst);
  const std::string json = instance_to_json(inst);
  if (o.out.empty()) {
    std::cout << json;
  } else {
    write_text(o.out, json);
  }
  int shortest = inst.num_locations();
  for (const auto& l : inst.preferences) {
    shortest = std::min(shortest, static_cast<int>(l.size()));
  }
  std::cerr << "instance: " << inst.num_families() << " families, "
            << inst.num_locations() << " locations, "
            << (has_complete_preferences(inst) ? "complete" : "incomplete")
            << " preferences (shortest list " << shortest << "), "
            << (report.ok() ? "valid" : "INVALID") << '\n';
  for (const auto& v : report.violations) std::cerr << "  " << v << '\n';
  return report.ok() ? 0 : 2;
}

struct RunOptions {
  std::string instance;
  std::string mech = "crsd";
  double alpha = 1.0;
  std::uint64_t seed = 0;
  std::string rank_value = "inverse";
  std::string out;
  std::string trace;
  std::string dump_network;
  bool strict = false;
};

int cmd_run(const RunOptions& o) {
  const Instance inst = read_instance(o.instance);
  const Mechanism mech = require_mechanism(o.mech);
  MechanismConfig cfg;
  cfg.alpha = Alpha(o.alpha);
  cfg.seed = o.seed;
  cfg.rank_value = parse_rank_value(o.rank_value);
  cfg.incomplete_mode = o.strict ? IncompleteMode::Strict
                                 : IncompleteMode::GovernmentOptimalFallback;
  std::ofstream trace;
  if (!o.trace.empty()) {
    trace.open(o.trace);
    if (!trace) throw Error(ErrorCode::Io, "cannot write " + o.trace);
    cfg.limits.on_node = csv_node_logger(trace);
  }
  if (!o.dump_network.empty()) {
    std::ofstream net(o.dump_network);
    if (!net) throw Error(ErrorCode::Io, "cannot write " + o.dump_network);
    dump_reduced_network(net, inst);
  }
  const Matching mu = run_mechanism(mech, inst, cfg);
  const double z_star = solve_assignment_value(inst);
  const MetricsReport report = compute_metrics(inst, mu);
  if (!o.out.empty()) write_text(o.out, matching_to_json(inst, mu));
  std::cout << metrics_csv_header(inst.num_locations()) << '\n'
            << metrics_csv_line(make_metrics_row(o.mech, o.alpha, o.seed, 0,
                                                 report, z_star))
            << '\n';
  return 0;
}

struct SweepOptions {
  std::vector<std::string> mechs;
  std::vector<double> alphas{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int reps = 20;
  std::uint64_t seed = 0;
  std::string regime = "positive";
  bool truncate = false;
  std::string rank_value = "inverse";
  std::string quota_mode = "exact";
  std::string out;
};

int cmd_sweep(const SweepOptions& o) {
  SweepSpec spec;
  if (!o.mechs.empty()) {
    spec.mechanisms.clear();
    for (const auto& m : o.mechs) spec.mechanisms.push_back(require_mechanism(m));
  } else if (o.truncate) {
    // TTC and DA need complete lists.
    spec.mechanisms = {Mechanism::Crsd, Mechanism::Crv, Mechanism::GovOpt};
  }
  for (double a : o.alphas) Alpha{a};
  spec.alphas = o.alphas;
  spec.replications = o.reps;
  spec.base_seed = o.seed;
  spec.regime = parse_regime(o.regime);
  spec.truncate = o.truncate;
  spec.rank_value = parse_rank_value(o.rank_value);
  spec.quota_mode = parse_quota_mode(o.quota_mode);

  std::ofstream file;
  std::ostream* csv = &std::cout;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw Error(ErrorCode::Io, "cannot write " + o.out);
    csv = &file;
  }
  bool header = false;
  const SweepResult result = run_sweep(spec, [&](const MetricsRow& row) {
    if (!header) {
      *csv << metrics_csv_header(static_cast<int>(row.cumulative.size())) << '\n';
      header = true;
    }
    *csv << metrics_csv_line(row) << '\n';
    csv->flush();
  });
  for (const auto& f : result.failures) std::cerr << "failed: " << f << '\n';
  const std::string summary = summary_csv(summarize(result.rows));
  if (!o.out.empty()) {
    write_text(o.out + ".summary.csv", summary);
    std::cout << summary;
  } else {
    std::cerr << summary;
  }
  return 0;
}

struct ReportOptions {
  std::string in;
  std::string out = "report";
};

int cmd_report(const ReportOptions& o) {
  std::ifstream in(o.in);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + o.in);
  const auto rows = parse_metrics_csv(in);
  for (const auto& path : write_report(rows, o.out)) {
    std::cout << path.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matching mechanisms trading family welfare against employment"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic instance");
  g->add_option("--regime", gen.regime, "positive | negative");
  g->add_flag("--truncate", gen.truncate, "Cut preference lists (incomplete setting)");
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "Instance JSON path (default: stdout)");
  g->add_option("--quota-mode", gen.quota_mode, "exact | upper");

  RunOptions run;
  auto* r = app.add_subcommand("run", "Run one mechanism on an instance");
  r->add_option("instance,--instance", run.instance, "Instance JSON")->required();
  r->add_option("--mech", run.mech, "crsd | crv | ttc | da | gov-opt");
  r->add_option("--alpha", run.alpha);
  r->add_option("--seed", run.seed, "CRSD picking order seed");
  r->add_option("--rank-value", run.rank_value, "inverse | file:<path>");
  r->add_option("--out", run.out, "Write the matching JSON here");
  r->add_option("--trace", run.trace, "CRV: branch-and-bound node CSV");
  r->add_option("--dump-network", run.dump_network,
                "Write the reduced assignment network");
  r->add_flag("--strict", run.strict,
              "CRSD: fail instead of placing families whose list ran out");

  SweepOptions sweep;
  auto* s = app.add_subcommand("sweep", "Sweep alpha over replications");
  s->add_option("--mech", sweep.mechs, "Mechanisms (repeat or comma-separate)")
      ->delimiter(',');
  s->add_option("--alphas", sweep.alphas)->delimiter(',');
  s->add_option("--reps", sweep.reps);
  s->add_option("--seed", sweep.seed, "Base seed; replication r uses seed + r");
  s->add_option("--regime", sweep.regime, "positive | negative");
  s->add_flag("--truncate", sweep.truncate);
  s->add_option("--rank-value", sweep.rank_value, "inverse | file:<path>");
  s->add_option("--quota-mode", sweep.quota_mode, "exact | upper");
  s->add_option("--out", sweep.out, "CSV path (default: stdout)");

  ReportOptions report;
  auto* p = app.add_subcommand("report", "Render SVG charts from a sweep CSV");
  p->add_option("csv,--in", report.in, "Sweep CSV")->required();
  p->add_option("--out", report.out, "Output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (g->parsed()) return cmd_gen(gen);
    if (r->parsed()) return cmd_run(run);
    if (s->parsed()) return cmd_sweep(sweep);
    if (p->parsed()) return cmd_report(report);
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[Internal]: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
