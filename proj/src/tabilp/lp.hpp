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

// Revised bounded-variable simplex over a sparse LU of the basis.
// Cold solves run two primal phases: phase 1 drives artificial variables to
// zero, phase 2 maximizes the objective. Warm solves reuse an earlier basis
// and run the dual simplex. Structural variables carry explicit [lo, hi]
// bounds and are never rows.

#ifndef TABILP_LP_HPP
#define TABILP_LP_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "tabilp/ilp.hpp"

namespace tabilp {

enum class Pricing {
  kBland,    // smallest eligible index; never cycles
  kDantzig,  // largest reduced cost, Bland on degenerate stalls
};

// Cold-start algorithm. kDual starts from the slack basis with every column
// on its cheaper bound and needs no phase 1; it applies only when each
// column with positive cost has a finite upper bound, else kPrimal is used.
enum class LpAlgorithm { kPrimal, kDual };

struct LpOptions {
  Pricing pricing = Pricing::kBland;
  LpAlgorithm algorithm = LpAlgorithm::kPrimal;
  std::size_t max_iterations = 5'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct LpRow {
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

struct LpModel {
  std::vector<double> objective;  // maximize
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  std::size_t num_columns() const { return objective.size(); }
};

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kLimit };
  Status status = Status::kInfeasible;
  double objective = -std::numeric_limits<double>::infinity();
  std::vector<double> x;
  std::size_t iterations = 0;
};

LpResult SolveLp(const LpModel& model, const LpOptions& options = {});

// Basis snapshot: basic variable per row plus, for every variable including
// slacks and artificials, whether a nonbasic one sits at its upper bound.
struct LpBasis {
  std::uint64_t stamp = 0;  // identifies the engine state it was taken from
  std::vector<std::uint32_t> basic;
  std::vector<std::uint8_t> at_upper;
};

// One LP whose column bounds change between solves. Resolve warm starts
// from a basis captured earlier on the same engine and falls back to a cold
// solve of the current bounds when that basis is unusable.
class LpEngine {
 public:
  LpEngine(const LpModel& model, const LpOptions& options = {});
  ~LpEngine();
  LpEngine(const LpEngine&) = delete;
  LpEngine& operator=(const LpEngine&) = delete;

  LpResult Solve();
  void SetBounds(std::size_t column, double lower, double upper);
  void SetDeadline(std::optional<std::chrono::steady_clock::time_point> deadline);
  // Only meaningful right after a solve that ended optimal.
  LpBasis Basis() const;
  LpResult Resolve(const LpBasis& basis, bool* warm = nullptr);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Continuous relaxation of a 0/1 program (0 <= x <= 1). For maximization the
// optimum bounds the integer optimum from above; -inf when infeasible.
LpResult LpRelax(const IlpProblem& problem, const LpOptions& options = {});

}  // namespace tabilp

#endif  // TABILP_LP_HPP
