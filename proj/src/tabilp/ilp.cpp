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

#include "tabilp/ilp.hpp"

#include <algorithm>
#include <cmath>

#include "tabilp/error.hpp"

namespace tabilp {

std::string_view ToString(Sense s) {
  switch (s) {
    case Sense::kLe: return "<=";
    case Sense::kGe: return ">=";
    case Sense::kEq: return "=";
  }
  return "?";
}

VarId IlpProblem::AddVariable(std::string name, double weight, bool cascade_indicator) {
  variables_.push_back(Variable{std::move(name), weight, cascade_indicator});
  return static_cast<VarId>(variables_.size() - 1);
}

std::size_t IlpProblem::AddConstraint(std::vector<Term> terms, Sense sense, double rhs,
                                      std::string tag) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  constraints_.push_back(Constraint{std::move(merged), sense, rhs, std::move(tag)});
  return constraints_.size() - 1;
}

void IlpProblem::Validate() const {
  for (std::size_t c = 0; c < constraints_.size(); ++c) {
    for (const Term& t : constraints_[c].terms) {
      if (t.var >= variables_.size()) {
        ThrowInvalid("constraint " + std::to_string(c) +
                     " references unknown variable " + std::to_string(t.var));
      }
      if (!std::isfinite(t.coef)) {
        ThrowInvalid("constraint " + std::to_string(c) + " has a non-finite coefficient");
      }
    }
    if (!std::isfinite(constraints_[c].rhs)) {
      ThrowInvalid("constraint " + std::to_string(c) + " has a non-finite rhs");
    }
  }
  for (const Variable& v : variables_) {
    if (!std::isfinite(v.weight)) ThrowInvalid("variable '" + v.name + "' has non-finite weight");
  }
}

double IlpProblem::Objective(std::span<const std::uint8_t> x) const {
  double z = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (x[j]) z += variables_[j].weight;
  }
  return z;
}

double IlpProblem::BaseObjective(std::span<const std::uint8_t> x) const {
  double z = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (x[j] && !variables_[j].cascade_indicator) z += variables_[j].weight;
  }
  return z;
}

bool IlpProblem::Satisfies(const Constraint& c, std::span<const std::uint8_t> x,
                           double tol) const {
  double lhs = 0.0;
  for (const Term& t : c.terms) {
    if (x[t.var]) lhs += t.coef;
  }
  switch (c.sense) {
    case Sense::kLe: return lhs <= c.rhs + tol;
    case Sense::kGe: return lhs >= c.rhs - tol;
    case Sense::kEq: return std::abs(lhs - c.rhs) <= tol;
  }
  return false;
}

bool IlpProblem::IsFeasible(std::span<const std::uint8_t> x, double tol) const {
  for (const Constraint& c : constraints_) {
    if (!Satisfies(c, x, tol)) return false;
  }
  return true;
}

double IlpProblem::SumAbsWeights() const {
  double s = 0.0;
  for (const Variable& v : variables_) s += std::abs(v.weight);
  return s;
}

}  // namespace tabilp
