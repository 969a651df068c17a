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

#include "refmatch/cmrv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "refmatch/transport.hpp"

namespace refmatch {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// A node is discarded when its bound cannot beat the incumbent by more than
// this; the returned welfare is therefore optimal to within it.
constexpr double kPruneTolerance = 1e-10;
// Two dual lines are considered to meet when the dual value at their
// intersection exceeds them by no more than this.
constexpr double kDualTolerance = 1e-11;
constexpr int kMaxMultiplierSteps = 60;

struct Node {
  std::size_t id;
  int depth;
  double parent_bound;
  std::vector<Pin> pins;
  AllowedMask forbidden;  // |F| x |L|, true = pair excluded
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.parent_bound != b.parent_bound) return a.parent_bound < b.parent_bound;
    return a.id > b.id;
  }
};

// One relaxation solve restricted to a node, summarized by its line
// D(lambda) >= welfare + lambda * slack.
struct Relaxed {
  TransportSolution<double> sol;
  double welfare = 0.0;  // reduced-problem rank value
  double slack = 0.0;    // reduced-problem pi minus the residual target
};

// Primal side: turns dual solutions into good feasible matchings. Works on
// full location vectors (-1 = unassigned) and ignores node restrictions, so
// anything it returns is a valid incumbent for the whole problem.
class Improver {
 public:
  Improver(const Instance& inst, const Matrix& weights, double floor)
      : inst_(inst), w_(weights), floor_(floor) {}

  double welfare(const std::vector<int>& loc) const {
    double s = 0.0;
    for (std::size_t i = 0; i < loc.size(); ++i) {
      if (loc[i] >= 0) s += w_(i, loc[i]);
    }
    return s;
  }

  double z(const std::vector<int>& loc) const {
    double s = 0.0;
    for (std::size_t i = 0; i < loc.size(); ++i) {
      if (loc[i] >= 0) s += inst_.pi(i, loc[i]);
    }
    return s;
  }

  // Applies the subset of alternating cycles of `infeasible` relative to
  // `feasible` that gains the most welfare while keeping z above the floor.
  std::vector<int> recombine(const std::vector<int>& feasible,
                             const std::vector<int>& infeasible) const {
    const int n = static_cast<int>(feasible.size());
    const int m = inst_.num_locations();
    std::vector<std::vector<int>> leaving(m + 1);
    for (int f = 0; f < n; ++f) {
      if (feasible[f] != infeasible[f]) leaving[slot(feasible[f])].push_back(f);
    }
    struct Cycle {
      std::vector<int> families;
      double dw = 0.0, dz = 0.0;
    };
    std::vector<Cycle> cycles;
    for (int start = 0; start <= m; ++start) {
      while (!leaving[start].empty()) {
        Cycle c;
        int at = start;
        do {
          if (leaving[at].empty()) return feasible;  // unbalanced loads
          const int f = leaving[at].back();
          leaving[at].pop_back();
          c.families.push_back(f);
          c.dw += value(w_, f, infeasible[f]) - value(w_, f, feasible[f]);
          c.dz += value(inst_.pi, f, infeasible[f]) - value(inst_.pi, f, feasible[f]);
          at = slot(infeasible[f]);
        } while (at != start);
        if (c.dw > 0.0) cycles.push_back(std::move(c));
      }
    }
    const double base_z = z(feasible);
    std::vector<char> take(cycles.size(), 0);
    if (cycles.size() <= 16) {
      double best = 0.0;
      for (unsigned mask = 1; mask < (1u << cycles.size()); ++mask) {
        double dw = 0.0, dz = 0.0;
        for (std::size_t k = 0; k < cycles.size(); ++k) {
          if (mask >> k & 1u) dw += cycles[k].dw, dz += cycles[k].dz;
        }
        if (dw > best && base_z + dz >= floor_) {
          best = dw;
          for (std::size_t k = 0; k < cycles.size(); ++k) take[k] = mask >> k & 1u;
        }
      }
    } else {
      std::vector<std::size_t> order(cycles.size());
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      auto ratio = [&](std::size_t k) {
        return cycles[k].dz >= 0.0 ? std::numeric_limits<double>::infinity()
                                   : cycles[k].dw / -cycles[k].dz;
      };
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return ratio(a) > ratio(b); });
      double zz = base_z;
      for (std::size_t k : order) {
        if (zz + cycles[k].dz >= floor_) {
          take[k] = 1;
          zz += cycles[k].dz;
        }
      }
    }
    std::vector<int> out = feasible;
    for (std::size_t k = 0; k < cycles.size(); ++k) {
      if (!take[k]) continue;
      for (int f : cycles[k].families) out[f] = infeasible[f];
    }
    return out;
  }

  // Hill-climbs with moves into spare capacity and pairwise exchanges.
  // A move must gain welfare, or keep it and gain z, and stay above the floor.
  void polish(std::vector<int>& loc) const {
    const int n = static_cast<int>(loc.size());
    const int m = inst_.num_locations();
    std::vector<int> load(m, 0);
    for (int l : loc) {
      if (l >= 0) ++load[l];
    }
    double zz = z(loc);
    auto better = [&](double dw, double dz) {
      if (zz + dz < floor_) return false;
      return dw > kMoveEpsilon || (dw >= -kMoveEpsilon && dz > kMoveEpsilon);
    };
    for (bool improved = true; improved;) {
      improved = false;
      for (int a = 0; a < n; ++a) {
        const int la = loc[a];
        if (la >= 0) {
          for (int c = 0; c < m; ++c) {
            if (c == la || load[c] >= inst_.quotas[c]) continue;
            const double dw = w_(a, c) - w_(a, la);
            const double dz = inst_.pi(a, c) - inst_.pi(a, la);
            if (better(dw, dz)) {
              --load[loc[a]];
              ++load[c];
              loc[a] = c;
              zz += dz;
              improved = true;
              break;
            }
          }
        }
        for (int b = a + 1; b < n; ++b) {
          const int x = loc[a], y = loc[b];
          if (x == y) continue;
          const double dw = value(w_, a, y) + value(w_, b, x) - value(w_, a, x) -
                            value(w_, b, y);
          const double dz = value(inst_.pi, a, y) + value(inst_.pi, b, x) -
                            value(inst_.pi, a, x) - value(inst_.pi, b, y);
          if (better(dw, dz)) {
            std::swap(loc[a], loc[b]);
            zz += dz;
            improved = true;
          }
        }
      }
    }
  }

 private:
  static constexpr double kMoveEpsilon = 1e-12;

  int slot(int loc) const { return loc >= 0 ? loc : inst_.num_locations(); }
  static double value(const Matrix& m, int i, int loc) {
    return loc >= 0 ? m(i, loc) : 0.0;
  }

  const Instance& inst_;
  const Matrix& w_;
  double floor_;
};

std::vector<int> as_vector(const Matching& mu) {
  std::vector<int> out(mu.size(), -1);
  for (int i = 0; i < mu.size(); ++i) {
    if (mu[i]) out[i] = *mu[i];
  }
  return out;
}

class BranchAndBound {
 public:
  BranchAndBound(const CmrvProblem& prob, const SolveLimits& limits)
      : prob_(prob),
        limits_(limits),
        weights_(rank_value_weights(prob.inst, prob.v)),
        improver_(prob.inst, weights_, prob.gamma - kTolerance),
        start_(std::chrono::steady_clock::now()) {}

  CmrvSolution run() {
    const int n = prob_.inst.num_families();
    const int m = prob_.inst.num_locations();
    queue_.push(Node{next_id_++, 0, std::numeric_limits<double>::infinity(), {},
                     AllowedMask::Constant(n, m, false)});
    while (!queue_.empty()) {
      if (processed_ >= limits_.max_nodes) fail("node limit reached");
      if (limits_.time_limit &&
          std::chrono::steady_clock::now() - start_ > *limits_.time_limit) {
        fail("time limit reached");
      }
      Node node = queue_.top();
      queue_.pop();
      ++processed_;
      process(std::move(node));
    }
    CmrvSolution out;
    out.nodes = processed_;
    if (!best_) {
      out.status = CmrvStatus::Infeasible;
      return out;
    }
    out.status = CmrvStatus::Optimal;
    out.matching = *best_;
    out.welfare = rank_value_welfare(prob_.inst, prob_.v, out.matching);
    out.z = government_objective(prob_.inst, out.matching);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    double bound = incumbent_;
    if (!queue_.empty()) bound = std::max(bound, queue_.top().parent_bound);
    std::ostringstream os;
    os << why << " after " << processed_ << " nodes; incumbent " << incumbent_
       << ", best bound " << bound;
    throw LimitExceededError(os.str(), incumbent_, bound);
  }

  void report(const Node& node, double bound, double lambda,
              NodeOutcome outcome) {
    if (!limits_.on_node) return;
    NodeRecord rec;
    rec.id = node.id;
    rec.depth = node.depth;
    rec.bound = bound;
    rec.incumbent = incumbent_;
    rec.lambda = lambda;
    rec.outcome = outcome;
    rec.pins = node.pins;
    for (int i = 0; i < node.forbidden.rows(); ++i) {
      for (int j = 0; j < node.forbidden.cols(); ++j) {
        if (node.forbidden(i, j)) rec.forbidden.push_back({i, j});
      }
    }
    limits_.on_node(rec);
  }

  Matching expand(const detail::ReducedProblem& rp,
                  const std::vector<int>& row_to_col) const {
    return rp.to_matching(prob_.inst.num_families(), row_to_col,
                          prob_.inst.num_locations());
  }

  void offer(const detail::ReducedProblem& rp, const std::vector<int>& row_to_col) {
    offer(expand(rp, row_to_col));
  }

  void offer(const Matching& mu) {
    const double welfare = rank_value_welfare(prob_.inst, prob_.v, mu);
    if (welfare > incumbent_) {
      incumbent_ = welfare;
      best_ = mu;
    }
  }

  void process(Node node) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (node.parent_bound <= incumbent_ + kPruneTolerance) {
      report(node, nan, 0.0, NodeOutcome::PrunedByBound);
      return;
    }
    const Instance& inst = prob_.inst;
    PinnedSet pins;
    for (const Pin& p : node.pins) pins.add(p.family, p.location);
    const auto rp = detail::reduce(inst, pins, &node.forbidden);
    const Matrix w = rp.restrict(weights_);
    const Matrix p = rp.restrict(inst.pi);
    double welfare_offset = 0.0;
    double pi_offset = 0.0;
    for (int i = 0; i < inst.num_families(); ++i) {
      if (!rp.pinned[i]) continue;
      welfare_offset += weights_(i, *rp.pinned[i]);
      pi_offset += inst.pi(i, *rp.pinned[i]);
    }
    const double target = prob_.gamma - kTolerance - pi_offset;

    auto relax = [&](const Matrix& objective) {
      Relaxed r;
      r.sol = solve_transport(objective, rp.capacity, &rp.allowed);
      if (!r.sol.feasible) return r;
      double zp = 0.0;
      for (std::size_t k = 0; k < r.sol.row_to_col.size(); ++k) {
        r.welfare += w(k, r.sol.row_to_col[k]);
        zp += p(k, r.sol.row_to_col[k]);
      }
      r.slack = zp - target;
      return r;
    };

    // Largest reachable z inside the node.
    Relaxed hi = relax(p);
    if (!hi.sol.feasible || hi.slack < 0.0) {
      report(node, nan, 0.0, NodeOutcome::Infeasible);
      return;
    }
    offer(rp, hi.sol.row_to_col);

    Relaxed lo = relax(w);
    if (lo.slack >= 0.0) {
      offer(rp, lo.sol.row_to_col);
      report(node, welfare_offset + lo.welfare, 0.0, NodeOutcome::SolvedExactly);
      return;
    }

    // Minimize the piecewise-linear dual D(lambda) by intersecting the lines
    // of the best known infeasible (lo) and feasible (hi) solutions.
    double lambda = 0.0;
    double bound = std::numeric_limits<double>::infinity();
    double bound_lambda = 0.0;
    struct DualPoint {
      double lambda;
      double value;
      TransportSolution<double> sol;
    };
    std::vector<DualPoint> duals;
    Matrix combined;
    for (int step = 0; step < kMaxMultiplierSteps; ++step) {
      lambda = std::max(0.0, (lo.welfare - hi.welfare) / (hi.slack - lo.slack));
      combined = w + lambda * p;
      Relaxed mid = relax(combined);
      const double dual = mid.welfare + lambda * mid.slack;
      const double line = lo.welfare + lambda * lo.slack;
      if (dual < bound) {
        bound = dual;
        bound_lambda = lambda;
      }
      duals.push_back({lambda, dual + welfare_offset, mid.sol});
      if (dual <= line + kDualTolerance) break;
      if (mid.slack >= 0.0) {
        offer(rp, mid.sol.row_to_col);
        hi = std::move(mid);
      } else {
        lo = std::move(mid);
      }
    }
    bound += welfare_offset;
    if (bound > incumbent_ + kPruneTolerance) {
      std::vector<int> guess =
          improver_.recombine(as_vector(expand(rp, hi.sol.row_to_col)),
                              as_vector(expand(rp, lo.sol.row_to_col)));
      improver_.polish(guess);
      offer(Matching::from_vector(guess));
    }
    if (bound <= incumbent_ + kPruneTolerance) {
      report(node, bound, bound_lambda, NodeOutcome::PrunedByBound);
      return;
    }
    lambda = bound_lambda;

    // Reduced-cost fixing: a pair whose reduced cost alone pushes some
    // multiplier's dual value below the incumbent cannot appear in an
    // improving solution.
    AllowedMask fixed = node.forbidden;
    for (const DualPoint& d : duals) {
      if (d.value - incumbent_ <= kPruneTolerance) continue;
      combined = w + d.lambda * p;
      for (int r = 0; r < rp.allowed.rows(); ++r) {
        const FamilyId f = rp.free_families[r];
        for (int c = 0; c < inst.num_locations(); ++c) {
          if (!rp.allowed(r, c) || fixed(f, c)) continue;
          if (d.value - d.sol.reduced_cost(combined, r, c) <=
              incumbent_ + kPruneTolerance) {
            fixed(f, c) = true;
          }
        }
      }
    }

    // Exact quotas: split one family's options by welfare. The family gains
    // welfare in the lo solution over the hi one; one child keeps only its
    // locations worth at least the lo value, the other only the rest.
    if (prob_.inst.quota_mode == QuotaMode::Exact) {
      int family_row = -1;
      double best_score = kNegInf;
      for (std::size_t r = 0; r < lo.sol.row_to_col.size(); ++r) {
        const int cl = lo.sol.row_to_col[r], ch = hi.sol.row_to_col[r];
        if (cl == ch || w(r, cl) <= w(r, ch)) continue;
        if (p(r, cl) > best_score) {
          best_score = p(r, cl);
          family_row = static_cast<int>(r);
        }
      }
      if (family_row >= 0) {
        report(node, bound, lambda, NodeOutcome::Branched);
        const FamilyId f = rp.free_families[family_row];
        const double cut = w(family_row, lo.sol.row_to_col[family_row]);
        Node keep{next_id_++, node.depth + 1, bound, node.pins, fixed};
        Node drop{next_id_++, node.depth + 1, bound, std::move(node.pins),
                  std::move(fixed)};
        for (int c = 0; c < inst.num_locations(); ++c) {
          if (weights_(f, c) >= cut) {
            drop.forbidden(f, c) = true;
          } else {
            keep.forbidden(f, c) = true;
          }
        }
        queue_.push(std::move(keep));
        queue_.push(std::move(drop));
        return;
      }
    }

    // Otherwise branch on the pair of the welfare-side solution with the
    // largest pi among the families on which the two dual solutions disagree.
    int branch_row = -1;
    int branch_col = -1;
    auto consider = [&](const std::vector<int>& from,
                        const std::vector<int>& other) {
      for (std::size_t r = 0; r < from.size(); ++r) {
        const int c = from[r];
        if (c == other[r]) continue;
        if (c >= inst.num_locations()) continue;
        if (fixed(rp.free_families[r], c)) continue;
        if (branch_row < 0 || p(r, c) > p(branch_row, branch_col)) {
          branch_row = static_cast<int>(r);
          branch_col = c;
        }
      }
    };
    consider(lo.sol.row_to_col, hi.sol.row_to_col);
    if (branch_row < 0) consider(hi.sol.row_to_col, lo.sol.row_to_col);
    if (branch_row < 0) {
      // Every disagreeing pair was fixed away: re-queue with the tighter mask.
      report(node, bound, lambda, NodeOutcome::Branched);
      queue_.push(Node{next_id_++, node.depth + 1, bound, node.pins, fixed});
      return;
    }
    report(node, bound, lambda, NodeOutcome::Branched);
    const Pin chosen{rp.free_families[branch_row], branch_col};
    Node pinned{next_id_++, node.depth + 1, bound, node.pins, fixed};
    pinned.pins.push_back(chosen);
    Node excluded{next_id_++, node.depth + 1, bound, std::move(node.pins),
                  std::move(fixed)};
    excluded.forbidden(chosen.family, chosen.location) = true;
    queue_.push(std::move(pinned));
    queue_.push(std::move(excluded));
  }

  const CmrvProblem& prob_;
  const SolveLimits& limits_;
  Matrix weights_;
  Improver improver_;
  std::chrono::steady_clock::time_point start_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue_;
  std::size_t next_id_ = 0;
  std::size_t processed_ = 0;
  double incumbent_ = kNegInf;
  std::optional<Matching> best_;
};

}  // namespace

CmrvSolution solve_cmrv(const CmrvProblem& prob, const SolveLimits& limits) {
  require_valid(prob.inst);
  if (prob.v.size() < prob.inst.num_locations()) {
    throw Error(ErrorCode::InvalidArgument,
                "rank value function shorter than the number of locations");
  }
  return BranchAndBound(prob, limits).run();
}

std::function<void(const NodeRecord&)> csv_node_logger(std::ostream& os) {
  os << "id,bound,incumbent,lambda\n";
  return [&os](const NodeRecord& rec) {
    os << rec.id << ',';
    if (!std::isnan(rec.bound)) os << rec.bound;
    os << ',';
    if (std::isfinite(rec.incumbent)) os << rec.incumbent;
    os << ',' << rec.lambda << '\n';
  };
}

}  // namespace refmatch
