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
#include "tabilp/reason.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "tabilp/error.hpp"

namespace tabilp {
namespace {

using Json = nlohmann::ordered_json;

std::size_t CascadeLevel(const TableIlp& model, const std::vector<std::uint8_t>& x) {
  std::size_t n = 0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    n += x[v] && model.keys[v].kind == VarKind::kCascade;
  }
  return n;
}

std::optional<std::size_t> ChosenOption(const TableIlp& model, const std::vector<std::uint8_t>& x) {
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] && model.keys[v].kind == VarKind::kOption) return model.keys[v].idx[0];
  }
  return std::nullopt;
}

bool HasAssignment(const Solution& s) {
  return s.status == SolveStatus::kOptimal ||
         (s.status == SolveStatus::kTimeout && !s.assignment.empty());
}

void Accumulate(SolverStats& into, const SolverStats& s) {
  into.nodes += s.nodes;
  into.lp_iterations += s.lp_iterations;
  into.wall_seconds += s.wall_seconds;
}

}  // namespace

void ReasonConfig::Validate() const {
  model.Validate();
  if (!(tie_tolerance >= 0.0) || !std::isfinite(tie_tolerance)) {
    ThrowInvalid("tie tolerance must be a finite value >= 0");
  }
  if (!std::isfinite(abstain_at_or_below)) ThrowInvalid("abstain threshold must be finite");
  if (!(time_limit_seconds > 0.0)) ThrowInvalid("time limit must be positive");
}

SolverOptions ReasonConfig::Solver() const {
  SolverOptions o;
  o.time_limit_seconds = time_limit_seconds;
  o.node_limit = node_limit;
  o.pricing = pricing;
  return o;
}

AnswerResult AnswerModel(const TableIlp& model, const ReasonConfig& config) {
  config.Validate();
  SolverOptions opts = config.Solver();
  opts.branch_priority = BranchPriority(model.problem);
  AnswerResult r;
  r.num_variables = model.problem.num_variables();
  r.num_constraints = model.problem.num_constraints();
  r.confidence.assign(model.num_options, 0.0);
  r.option_feasible.assign(model.num_options, false);
  r.option_support.assign(model.num_options, std::nullopt);

  auto solve = [&](const IlpProblem& p) {
    Solution s = Solve(p, opts);
    ++r.solves;
    Accumulate(r.stats, s.stats);
    return s;
  };

  const Solution best = solve(model.problem);
  r.status = best.status;
  if (!HasAssignment(best)) return r;
  const auto first = ChosenOption(model, best.assignment);
  if (!first) ThrowInternal("solution has no active option");
  r.objective = model.problem.BaseObjective(best.assignment);
  r.support = SupportFromAssignment(model, best.assignment);
  if (r.objective <= config.abstain_at_or_below) return r;

  const std::size_t level = CascadeLevel(model, best.assignment);
  r.chosen.push_back(*first);
  r.confidence[*first] = r.objective;
  r.option_feasible[*first] = true;
  r.option_support[*first] = r.support;

  // Ties: disable every option found so far and compare the runner-up.
  IlpProblem reduced = model.problem;
  while (true) {
    const auto v = model.Unary(VarKind::kOption, r.chosen.back());
    reduced.AddConstraint({{*v, 1.0}}, Sense::kEq, 0.0, std::string(Label(Family::kOptionDisabled)));
    const Solution next = solve(reduced);
    if (!HasAssignment(next) || CascadeLevel(model, next.assignment) != level) break;
    const double b = model.problem.BaseObjective(next.assignment);
    const double scale = std::max(std::abs(r.objective), std::abs(b));
    if (std::abs(r.objective - b) > config.tie_tolerance * scale) break;
    const auto m = ChosenOption(model, next.assignment);
    if (!m) ThrowInternal("solution has no active option");
    r.chosen.push_back(*m);
    r.confidence[*m] = b;
    r.option_feasible[*m] = true;
    r.option_support[*m] = SupportFromAssignment(model, next.assignment);
  }
  std::sort(r.chosen.begin(), r.chosen.end());
  r.tie = r.chosen.size() >= 2;

  if (config.option_confidences) {
    for (std::size_t m = 0; m < model.num_options; ++m) {
      if (std::find(r.chosen.begin(), r.chosen.end(), m) != r.chosen.end()) continue;
      const auto v = model.Unary(VarKind::kOption, m);
      if (!v) continue;
      IlpProblem forced = model.problem;
      forced.AddConstraint({{*v, 1.0}}, Sense::kEq, 1.0, std::string(Label(Family::kOptionForced)));
      const Solution s = solve(forced);
      if (!HasAssignment(s)) continue;
      r.option_feasible[m] = true;
      r.confidence[m] = model.problem.BaseObjective(s.assignment);
      r.option_support[m] = SupportFromAssignment(model, s.assignment);
    }
  }
  return r;
}

AnswerResult Answer(const std::vector<Table>& tables, const QuestionInstance& q,
                    const ReasonConfig& config) {
  ValidateQuestion(q);
  const TableIlp model = BuildModel(tables, q, config.model);
  return AnswerModel(model, config);
}

double EvalScore(const AnswerResult& result, std::size_t gold) {
  if (result.chosen.empty()) return 0.0;
  if (std::find(result.chosen.begin(), result.chosen.end(), gold) == result.chosen.end()) {
    return 0.0;
  }
  return 1.0 / static_cast<double>(result.chosen.size());
}

namespace {

Json SupportJson(const SupportGraph& g) {
  Json elements = Json::array();
  for (std::size_t i : g.tables) elements.push_back("T" + std::to_string(i));
  for (const auto& [i, j] : g.rows) {
    elements.push_back("r" + std::to_string(i) + "_" + std::to_string(j));
  }
  for (const auto& [i, k] : g.columns) {
    elements.push_back("l" + std::to_string(i) + "_" + std::to_string(k));
  }
  for (const auto& [i, k] : g.headers) elements.push_back(ToString(ElementRef::Header(i, k)));
  for (const ElementRef& c : g.cells) elements.push_back(ToString(c));
  for (std::size_t l : g.constituents) elements.push_back(ToString(ElementRef::Constituent(l)));
  for (std::size_t m : g.options) elements.push_back(ToString(ElementRef::Option(m)));
  Json edges = Json::array();
  for (const ScoredEdge& e : g.edges) {
    edges.push_back({{"a", ToString(e.a)},
                     {"b", ToString(e.b)},
                     {"kind", std::string(ToString(e.kind))},
                     {"weight", e.weight}});
  }
  Json out;
  out["objective"] = g.objective;
  out["base_objective"] = g.base_objective;
  out["elements"] = std::move(elements);
  out["edges"] = std::move(edges);
  out["which_active"] = g.which_active;
  out["which_aligned"] = g.which_aligned;
  out["proximity_boosts"] = g.proximity.size();
  out["cascade_levels"] = g.cascade_levels;
  return out;
}

}  // namespace

std::string AnswerToJson(const AnswerResult& r, const QuestionInstance& q,
                         bool include_support) {
  Json j;
  j["id"] = q.id;
  j["chosen"] = r.chosen;
  j["tie"] = r.tie;
  j["abstained"] = r.abstained();
  j["status"] = std::string(ToString(r.status));
  j["objective"] = r.objective;
  j["confidence"] = r.confidence;
  j["option_feasible"] = r.option_feasible;
  if (q.gold) {
    j["gold"] = *q.gold;
    j["score"] = EvalScore(r, *q.gold);
  }
  if (r.cascade_stage) j["cascade_stage"] = *r.cascade_stage;
  j["variables"] = r.num_variables;
  j["constraints"] = r.num_constraints;
  j["solves"] = r.solves;
  j["nodes"] = r.stats.nodes;
  j["lp_iterations"] = r.stats.lp_iterations;
  if (include_support && r.support) j["support"] = SupportJson(*r.support);
  return j.dump();
}

}  // namespace tabilp
