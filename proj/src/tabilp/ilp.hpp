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

// A 0/1 integer program in maximize orientation:
//
//   maximize  w^T x   subject to  A x (<=, >=, =) b,  x in {0, 1}^n.

#ifndef TABILP_ILP_HPP
#define TABILP_ILP_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tabilp {

using VarId = std::uint32_t;

enum class Sense : unsigned char { kLe, kGe, kEq };

std::string_view ToString(Sense s);

struct Term {
  VarId var = 0;
  double coef = 0.0;

  bool operator==(const Term&) const = default;
};

struct Variable {
  std::string name;
  double weight = 0.0;
  // Marks big-M cascade indicators so callers can separate them from the
  // base objective.
  bool cascade_indicator = false;

  bool operator==(const Variable&) const = default;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
  std::string tag;

  bool operator==(const Constraint&) const = default;
};

class IlpProblem {
 public:
  VarId AddVariable(std::string name, double weight, bool cascade_indicator = false);
  // Terms on the same variable are merged; zero coefficients dropped.
  std::size_t AddConstraint(std::vector<Term> terms, Sense sense, double rhs,
                            std::string tag);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  bool empty() const { return variables_.empty() && constraints_.empty(); }

  Variable& variable(VarId v) { return variables_.at(v); }
  const Variable& variable(VarId v) const { return variables_.at(v); }

  // Throws if any constraint references an unregistered variable.
  void Validate() const;

  double Objective(std::span<const std::uint8_t> x) const;
  // Objective without the cascade-indicator terms.
  double BaseObjective(std::span<const std::uint8_t> x) const;
  bool IsFeasible(std::span<const std::uint8_t> x, double tol = 1e-6) const;
  bool Satisfies(const Constraint& c, std::span<const std::uint8_t> x,
                 double tol = 1e-6) const;
  double SumAbsWeights() const;

  bool operator==(const IlpProblem&) const = default;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
};

}  // namespace tabilp

#endif  // TABILP_ILP_HPP
