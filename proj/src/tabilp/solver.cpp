// Copyright 2026 The tabilp Authors
//
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

#include "tabilp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <queue>

#include "tabilp/error.hpp"

namespace tabilp {
namespace {

using Clock = std::chrono::steady_clock;

// Slack added to computed LP bounds before pruning so that floating-point
// error in the simplex never discards an improving subtree.
constexpr double kBoundSlack = 1e-7;
constexpr double kIntegralityTol = 1e-6;

using Fixings = std::vector<std::int8_t>;

struct Node {
  double bound = 0.0;
  std::size_t id = 0;
  Fixings fixings;
  std::shared_ptr<const LpBasis> basis;  // parent's optimal basis
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
    return a.id > b.id;                                // then FIFO
  }
};

struct NodeLp {
  enum class Status { kSolved, kInfeasible, kLimit } status = Status::kInfeasible;
  double bound = 0.0;
  std::vector<double> x;  // full length, fixed entries filled in
  std::shared_ptr<const LpBasis> basis;
};

class BranchAndBound {
 public:
  BranchAndBound(const IlpProblem& problem, const SolverOptions& options,
                 Clock::time_point start)
      : problem_(problem), options_(options), start_(start) {
    if (!options.branch_priority.empty() && options.branch_priority.size() != problem.num_variables()) {
      ThrowInvalid("branch priority must list every variable");
    }
    if (std::isfinite(options.time_limit_seconds)) {
      deadline_ = start + std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(options.time_limit_seconds));
    }
    const std::size_t n = problem.num_variables();
    lp_.objective.resize(n);
    for (std::size_t j = 0; j < n; ++j) lp_.objective[j] = problem.variable(static_cast<VarId>(j)).weight;
    lp_.lower.assign(n, 0.0);
    lp_.upper.assign(n, 1.0);
    for (const Constraint& c : problem.constraints()) lp_.rows.push_back(LpRow{c.terms, c.sense, c.rhs});
    lp_options_.pricing = options.pricing;
    lp_options_.algorithm = LpAlgorithm::kDual;
    lp_options_.deadline = deadline_;
    engine_ = std::make_unique<LpEngine>(lp_, lp_options_);
  }

  struct SearchOutcome {
    std::optional<std::vector<std::uint8_t>> best;
    double best_objective = -std::numeric_limits<double>::infinity();
    bool limit_hit = false;
  };

  // Best-first search with plunging: after a branch the child in the
  // rounding direction is processed at once and its sibling is queued.
  // With `lexicographic`, optima within kObjectiveTol compete on assignment
  // order and nodes whose bound cannot beat the incumbent by more than LP
  // noise are kept only if they may hold a lexicographically smaller point.
  SearchOutcome Search() {
    SearchOutcome out;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::size_t next_id = 0;
    std::optional<Node> plunge =
        Node{std::numeric_limits<double>::infinity(), next_id++,
             Fixings(problem_.num_variables(), -1), nullptr};
    bool first = true;
    while (plunge || !open.empty()) {
      if (LimitReached()) {
        out.limit_hit = true;
        return out;
      }
      Node node;
      if (plunge) {
        node = std::move(*plunge);
        plunge.reset();
      } else {
        node = open.top();
        open.pop();
      }
      if (!Worth(node.bound, node.fixings, out)) continue;
      ++stats_.nodes;
      NodeLp lp = SolveNode(node.fixings, node.basis);
      if (lp.status == NodeLp::Status::kLimit) {
        out.limit_hit = true;
        return out;
      }
      if (lp.status == NodeLp::Status::kInfeasible) continue;
      if (options_.node_observer) options_.node_observer(NodeRecord{node.fixings, lp.bound});
      if (!Worth(lp.bound, node.fixings, out)) continue;

      if (first) TryIncumbent(Round(lp.x), out);  // greedy rounding of the root LP
      first = false;

      std::optional<std::size_t> branch_var;
      double best_frac = 2.0;
      int best_priority = std::numeric_limits<int>::min();
      const auto& priority = options_.branch_priority;
      for (std::size_t j = 0; j < lp.x.size(); ++j) {
        if (node.fixings[j] >= 0) continue;
        const double frac = std::abs(lp.x[j] - std::round(lp.x[j]));
        if (frac <= kIntegralityTol) continue;
        const int pr = priority.empty() ? 0 : priority[j];
        const double dist = std::abs(lp.x[j] - 0.5);
        if (pr > best_priority || (pr == best_priority && dist < best_frac)) {
          best_priority = pr;
          best_frac = dist;
          branch_var = j;
        }
      }
      if (!branch_var) {
        std::vector<std::uint8_t> x = Round(lp.x);
        const bool feasible = problem_.IsFeasible(x, kFeasibilityTol);
        if (feasible) TryIncumbent(std::move(x), out);
        if (feasible && !options_.lexicographic) continue;
        if (!Worth(lp.bound, node.fixings, out)) continue;
        // Either rounding broke feasibility or the node may still hold a
        // lexicographically smaller optimum: split on the first free
        // variable that is set in the incumbent, else the first free one.
        for (std::size_t j = 0; j < node.fixings.size() && !branch_var; ++j) {
          if (node.fixings[j] < 0 && out.best && (*out.best)[j] == 1) branch_var = j;
        }
        for (std::size_t j = 0; j < node.fixings.size() && !branch_var; ++j) {
          if (node.fixings[j] < 0) branch_var = j;
        }
        if (!branch_var) continue;
      }
      const std::int8_t preferred = lp.x[*branch_var] >= 0.5 ? 1 : 0;
      for (std::int8_t v : {preferred, static_cast<std::int8_t>(1 - preferred)}) {
        Node child{lp.bound, next_id++, node.fixings, lp.basis};
        child.fixings[*branch_var] = v;
        if (v == preferred) {
          plunge = std::move(child);
        } else {
          open.push(std::move(child));
        }
      }
    }
    return out;
  }

  SolverStats& stats() { return stats_; }

  bool LimitReached() const {
    if (stats_.nodes >= options_.node_limit) return true;
    return deadline_ && Clock::now() > *deadline_;
  }

 private:
  bool Worth(double bound, const Fixings& fix, const SearchOutcome& out) const {
    if (!out.best) return true;
    if (!options_.lexicographic) return bound + kBoundSlack > out.best_objective + kObjectiveTol;
    if (bound + kBoundSlack < out.best_objective - kObjectiveTol) return false;
    if (bound > out.best_objective + kBoundSlack) return true;
    return MayBeatLex(fix, *out.best);
  }

  // True when some completion of `fix` is lexicographically below `best`.
  static bool MayBeatLex(const Fixings& fix, const std::vector<std::uint8_t>& best) {
    for (std::size_t j = 0; j < fix.size(); ++j) {
      if (fix[j] < 0) {
        if (best[j] == 1) return true;
      } else if (fix[j] != best[j]) {
        return fix[j] < best[j];
      }
    }
    return false;
  }

  static std::vector<std::uint8_t> Round(const std::vector<double>& x) {
    std::vector<std::uint8_t> r(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) r[j] = x[j] >= 0.5 ? 1 : 0;
    return r;
  }

  void TryIncumbent(std::vector<std::uint8_t> x, SearchOutcome& out) const {
    if (!problem_.IsFeasible(x, kFeasibilityTol)) return;
    const double z = problem_.Objective(x);
    bool take = !out.best || z > out.best_objective + kObjectiveTol;
    if (!take && options_.lexicographic && z >= out.best_objective - kObjectiveTol) {
      take = x < *out.best;
    }
    if (!take && !options_.lexicographic) take = z > out.best_objective;
    if (take) {
      out.best = std::move(x);
      out.best_objective = z;
    }
  }

  // Solves the relaxation under `fix` by bound changes on the shared engine,
  // warm started from the parent's basis or else the root basis.
  NodeLp SolveNode(const Fixings& fix, const std::shared_ptr<const LpBasis>& parent) {
    NodeLp out;
    const std::size_t n = problem_.num_variables();
    if (!root_solved_) {
      root_solved_ = true;
      LpResult r = engine_->Solve();
      stats_.lp_iterations += r.iterations;
      if (r.status == LpResult::Status::kOptimal) {
        root_basis_ = std::make_shared<const LpBasis>(engine_->Basis());
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = fix[j] == 1 ? 1.0 : 0.0;
      const double hi = fix[j] == 0 ? 0.0 : 1.0;
      engine_->SetBounds(j, lo, hi);
    }
    std::shared_ptr<const LpBasis> start = parent ? parent : root_basis_;
    bool warm = false;
    LpResult r = engine_->Resolve(start ? *start : LpBasis{}, &warm);
    stats_.lp_iterations += r.iterations;
    if (r.status == LpResult::Status::kLimit) {
      out.status = NodeLp::Status::kLimit;
      return out;
    }
    if (r.status == LpResult::Status::kInfeasible) return out;
    out.status = NodeLp::Status::kSolved;
    out.bound = r.objective;
    out.x = std::move(r.x);
    for (std::size_t j = 0; j < n; ++j) {
      if (fix[j] >= 0) out.x[j] = static_cast<double>(fix[j]);
    }
    if (warm) out.basis = std::make_shared<const LpBasis>(engine_->Basis());
    return out;
  }

  const IlpProblem& problem_;
  const SolverOptions& options_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
  SolverStats stats_;
  LpModel lp_;
  LpOptions lp_options_;
  std::unique_ptr<LpEngine> engine_;
  bool root_solved_ = false;
  std::shared_ptr<const LpBasis> root_basis_;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

}  // namespace

std::string_view ToString(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeout: return "timeout";
  }
  return "?";
}

Solution Solve(const IlpProblem& problem, const SolverOptions& options) {
  problem.Validate();
  const Clock::time_point start = Clock::now();
  BranchAndBound bnb(problem, options, start);
  Solution sol;
  auto outcome = bnb.Search();
  if (outcome.limit_hit) {
    sol.status = SolveStatus::kTimeout;
  } else if (!outcome.best) {
    sol.status = SolveStatus::kInfeasible;
  } else {
    sol.status = SolveStatus::kOptimal;
  }
  if (outcome.best) {
    sol.assignment = std::move(*outcome.best);
    sol.objective = problem.Objective(sol.assignment);
  }
  sol.stats = bnb.stats();
  sol.stats.wall_seconds = Seconds(start);
  return sol;
}

Solution BruteForce(const IlpProblem& problem) {
  problem.Validate();
  const std::size_t n = problem.num_variables();
  if (n > kBruteForceMaxVars) {
    ThrowInvalid("brute force supports at most " + std::to_string(kBruteForceMaxVars) +
                 " variables, got " + std::to_string(n));
  }
  const Clock::time_point start = Clock::now();
  // Enumerate in lexicographic order: variable 0 is the most significant bit.
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<std::uint8_t> x(n, 0);
  auto decode = [&](std::uint64_t mask) {
    for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> (n - 1 - j)) & 1U;
  };

  // Split-table evaluation of constraint activities for speed; the exact
  // objective of each feasible point is recomputed in variable order.
  const std::size_t low_bits = n / 2;
  const std::size_t high_bits = n - low_bits;
  const auto& cons = problem.constraints();
  std::vector<std::vector<double>> low(cons.size()), high(cons.size());
  for (std::size_t c = 0; c < cons.size(); ++c) {
    std::vector<double> coef(n, 0.0);
    for (const Term& t : cons[c].terms) coef[t.var] += t.coef;
    low[c].assign(std::size_t{1} << low_bits, 0.0);
    high[c].assign(std::size_t{1} << high_bits, 0.0);
    for (std::size_t m = 0; m < low[c].size(); ++m) {
      for (std::size_t b = 0; b < low_bits; ++b) {
        if (m >> b & 1U) low[c][m] += coef[n - 1 - b];
      }
    }
    for (std::size_t m = 0; m < high[c].size(); ++m) {
      for (std::size_t b = 0; b < high_bits; ++b) {
        if (m >> b & 1U) high[c][m] += coef[n - 1 - low_bits - b];
      }
    }
  }
  auto feasible = [&](std::uint64_t mask) {
    const std::size_t lo = static_cast<std::size_t>(mask & ((std::uint64_t{1} << low_bits) - 1));
    const std::size_t hi = static_cast<std::size_t>(mask >> low_bits);
    for (std::size_t c = 0; c < cons.size(); ++c) {
      const double lhs = low[c][lo] + high[c][hi];
      const double slack = 1e-6;
      switch (cons[c].sense) {
        case Sense::kLe: if (lhs > cons[c].rhs + slack) return false; break;
        case Sense::kGe: if (lhs < cons[c].rhs - slack) return false; break;
        case Sense::kEq: if (std::abs(lhs - cons[c].rhs) > slack) return false; break;
      }
    }
    decode(mask);
    return problem.IsFeasible(x, kFeasibilityTol);
  };

  Solution sol;
  bool any = false;
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (!feasible(mask)) continue;
    const double z = problem.Objective(x);
    if (!any || z > best) best = z;
    any = true;
  }
  sol.stats.nodes = static_cast<std::size_t>(count);
  if (!any) {
    sol.status = SolveStatus::kInfeasible;
    sol.stats.wall_seconds = Seconds(start);
    return sol;
  }
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (!feasible(mask)) continue;
    if (problem.Objective(x) >= best - kObjectiveTol) {
      sol.assignment = x;
      break;
    }
  }
  sol.status = SolveStatus::kOptimal;
  sol.objective = problem.Objective(sol.assignment);
  sol.stats.wall_seconds = Seconds(start);
  return sol;
}

}  // namespace tabilp
