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
// Answering a question: build, solve, detect ties by disabling the chosen
// option and re-solving, and score per-option confidence by forcing each
// option in turn.

#ifndef TABILP_REASON_HPP
#define TABILP_REASON_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tabilp/kb.hpp"
#include "tabilp/model.hpp"
#include "tabilp/solver.hpp"
#include "tabilp/support.hpp"

namespace tabilp {

struct ReasonConfig {
  ModelConfig model;
  // Two objectives tie when they differ by at most this fraction.
  double tie_tolerance = 1e-6;
  // A best objective at or below this value means no positive support.
  double abstain_at_or_below = 0.0;
  bool option_confidences = true;
  double time_limit_seconds = std::numeric_limits<double>::infinity();
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
  Pricing pricing = Pricing::kDantzig;

  void Validate() const;
  SolverOptions Solver() const;
};

struct AnswerResult {
  std::vector<std::size_t> chosen;  // sorted; empty when abstaining
  bool tie = false;
  // Objective with the option forced active; 0 when that is infeasible.
  std::vector<double> confidence;
  std::vector<bool> option_feasible;
  double objective = 0.0;  // best base objective
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<SupportGraph> support;
  // Support graph behind each option's confidence, when one was solved.
  std::vector<std::optional<SupportGraph>> option_support;
  std::size_t num_variables = 0;
  std::size_t num_constraints = 0;
  std::size_t solves = 0;
  SolverStats stats;  // summed over all solves
  // Index of the cascade stage that answered; the stage count means the
  // unforced model.
  std::optional<std::size_t> cascade_stage;

  bool abstained() const { return chosen.empty(); }
};

// Solves a built model (possibly with forcing rows or a cascade extension).
AnswerResult AnswerModel(const TableIlp& model, const ReasonConfig& config);

AnswerResult Answer(const std::vector<Table>& tables, const QuestionInstance& q,
                    const ReasonConfig& config);

// 1 for a correct single choice, 1/k for a k-way tie containing gold, else 0.
double EvalScore(const AnswerResult& result, std::size_t gold);

// One JSON object (no trailing newline). Wall time is left out so repeated
// runs produce identical bytes.
std::string AnswerToJson(const AnswerResult& result, const QuestionInstance& q,
                         bool include_support = true);

}  // namespace tabilp

#endif  // TABILP_REASON_HPP
