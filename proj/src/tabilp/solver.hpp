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

// Exact 0/1 solver: best-first branch-and-bound over warm-started LP
// relaxations. With lexicographic tie-breaking (the default) the search
// returns, among all optima (objective within kObjectiveTol of the best), the
// lexicographically smallest assignment in variable order. BruteForce applies
// the same rule exhaustively.

#ifndef TABILP_SOLVER_HPP
#define TABILP_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "tabilp/ilp.hpp"
#include "tabilp/lp.hpp"

namespace tabilp {

inline constexpr double kFeasibilityTol = 1e-6;
inline constexpr double kObjectiveTol = 1e-9;
inline constexpr std::size_t kBruteForceMaxVars = 24;

enum class SolveStatus { kOptimal, kInfeasible, kTimeout };

std::string_view ToString(SolveStatus s);

struct SolverStats {
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
  double wall_seconds = 0.0;
};

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<std::uint8_t> assignment;
  double objective = -std::numeric_limits<double>::infinity();
  SolverStats stats;
};

// Fixings use -1 for free, 0/1 for fixed.
struct NodeRecord {
  std::span<const std::int8_t> fixings;
  double bound = 0.0;
};

struct SolverOptions {
  double time_limit_seconds = std::numeric_limits<double>::infinity();
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
  Pricing pricing = Pricing::kDantzig;
  bool lexicographic = true;
  // Optional per-variable branching priority; fractional variables of the
  // highest priority are branched on first. Empty means uniform.
  std::vector<int> branch_priority;
  // Called for every node whose LP relaxation was solved to optimality.
  std::function<void(const NodeRecord&)> node_observer;
};

Solution Solve(const IlpProblem& problem, const SolverOptions& options = {});

// Exhaustive enumeration; throws for more than kBruteForceMaxVars variables.
Solution BruteForce(const IlpProblem& problem);

}  // namespace tabilp

#endif  // TABILP_SOLVER_HPP
