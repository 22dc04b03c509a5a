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
#include <cmath>

#include "doctest.h"
#include "random_ilp.hpp"
#include "tabilp/lp.hpp"
#include "tabilp/solver.hpp"

namespace tabilp {
namespace {

TEST_CASE("two variables sharing a unit budget") {
  IlpProblem p;
  const VarId a = p.AddVariable("a", 1.0);
  const VarId b = p.AddVariable("b", 1.0);
  p.AddConstraint({{a, 1.0}, {b, 1.0}}, Sense::kLe, 1.0, "cap");
  const Solution s = Solve(p);
  CHECK(s.status == SolveStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(1.0));
  // Lexicographically smallest optimum keeps the first variable at zero.
  CHECK(s.assignment == std::vector<std::uint8_t>{0, 1});
}

TEST_CASE("lp relaxation of a weighted knapsack row") {
  IlpProblem p;
  const VarId a = p.AddVariable("a", 3.0);
  const VarId b = p.AddVariable("b", 2.0);
  p.AddConstraint({{a, 1.0}, {b, 1.0}}, Sense::kLe, 1.0, "cap");
  const LpResult r = LpRelax(p);
  REQUIRE(r.status == LpResult::Status::kOptimal);
  CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("covering row with no variables is infeasible") {
  IlpProblem p;
  p.AddVariable("x", 1.0);
  p.AddConstraint({}, Sense::kGe, 1.0, "options");
  CHECK(Solve(p).status == SolveStatus::kInfeasible);
  CHECK(BruteForce(p).status == SolveStatus::kInfeasible);
}

TEST_CASE("brute force edge cases") {
  IlpProblem empty;
  const Solution s = BruteForce(empty);
  CHECK(s.status == SolveStatus::kOptimal);
  CHECK(s.objective == 0.0);
  CHECK(s.assignment.empty());

  IlpProblem neg;
  neg.AddVariable("x", -1.0);
  CHECK(BruteForce(neg).assignment == std::vector<std::uint8_t>{0});

  IlpProblem big;
  for (int j = 0; j < 25; ++j) big.AddVariable("x", 1.0);
  CHECK_THROWS(BruteForce(big));
}

TEST_CASE("random programs agree with enumeration") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    CAPTURE(seed);
    const bool integral = seed % 3 != 0;
    const IlpProblem p = testing::RandomIlp(seed, {18, 30, integral});
    const Solution bf = BruteForce(p);
    const Solution bb = Solve(p);
    REQUIRE(bb.status == bf.status);
    if (bf.status != SolveStatus::kOptimal) continue;
    CHECK(bb.objective == bf.objective);
    CHECK(bb.assignment == bf.assignment);
    CHECK(p.IsFeasible(bb.assignment));
    const LpResult lp = LpRelax(p);
    REQUIRE(lp.status == LpResult::Status::kOptimal);
    CHECK(lp.objective >= bb.objective - 1e-6);
  }
}

TEST_CASE("dantzig pricing reaches the same optima") {
  SolverOptions opts;
  opts.pricing = Pricing::kDantzig;
  for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
    const IlpProblem p = testing::RandomIlp(seed);
    const Solution a = Solve(p);
    const Solution b = Solve(p, opts);
    REQUIRE(a.status == b.status);
    if (a.status == SolveStatus::kOptimal) CHECK(a.assignment == b.assignment);
  }
}

}  // namespace
}  // namespace tabilp
