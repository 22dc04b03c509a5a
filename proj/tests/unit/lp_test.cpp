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
#include <random>
#include <vector>

#include "doctest.h"
#include "random_ilp.hpp"
#include "synthetic.hpp"
#include "tabilp/lp.hpp"
#include "tabilp/model.hpp"
#include "tabilp/solver.hpp"

namespace tabilp {
namespace {

bool Integral(const std::vector<double>& x) {
  for (double v : x) {
    if (std::abs(v - std::round(v)) > 1e-6) return false;
  }
  return true;
}

void CheckBound(const IlpProblem& p) {
  const LpResult lp = LpRelax(p);
  const Solution ilp = Solve(p);
  if (ilp.status != SolveStatus::kOptimal) return;
  REQUIRE(lp.status == LpResult::Status::kOptimal);
  CHECK(lp.objective >= ilp.objective - 1e-6);
  if (Integral(lp.x)) CHECK(std::abs(lp.objective - ilp.objective) <= 1e-6);
}

TEST_CASE("relaxation bounds random programs from above") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    CAPTURE(seed);
    CheckBound(testing::RandomIlp(seed, {18, 30, seed % 2 == 1}));
  }
}

TEST_CASE("relaxation bounds table programs from above") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    CAPTURE(seed);
    const auto inst = testing::MakeInstance(seed);
    CheckBound(BuildModel(inst.tables, inst.question, ModelConfig{}).problem);
  }
}

TEST_CASE("assignment polytope is integral") {
  // 4x4 assignment: totally unimodular, so the relaxation is tight.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    IlpProblem p;
    VarId v[4][4];
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) v[i][j] = p.AddVariable("x", double(rng() % 9) + 1.0);
    }
    for (int i = 0; i < 4; ++i) {
      std::vector<Term> row, col;
      for (int j = 0; j < 4; ++j) {
        row.push_back({v[i][j], 1.0});
        col.push_back({v[j][i], 1.0});
      }
      p.AddConstraint(row, Sense::kEq, 1.0, "row");
      p.AddConstraint(col, Sense::kEq, 1.0, "col");
    }
    const LpResult lp = LpRelax(p);
    REQUIRE(lp.status == LpResult::Status::kOptimal);
    const Solution s = Solve(p);
    CHECK(lp.objective == doctest::Approx(s.objective).epsilon(1e-9));
    CHECK(lp.objective == doctest::Approx(BruteForce(p).objective).epsilon(1e-9));
  }
}

TEST_CASE("pricing rules and algorithms agree on the optimum") {
  for (std::uint64_t seed = 300; seed < 360; ++seed) {
    CAPTURE(seed);
    const IlpProblem p = testing::RandomIlp(seed, {18, 30, false});
    const LpResult bland = LpRelax(p);
    const LpResult dantzig = LpRelax(p, {Pricing::kDantzig});
    REQUIRE(bland.status == dantzig.status);
    if (bland.status != LpResult::Status::kOptimal) continue;
    CHECK(bland.objective == doctest::Approx(dantzig.objective).epsilon(1e-9));
    LpModel m;
    for (const Variable& var : p.variables()) {
      m.objective.push_back(var.weight);
      m.lower.push_back(0.0);
      m.upper.push_back(1.0);
    }
    for (const Constraint& c : p.constraints()) m.rows.push_back({c.terms, c.sense, c.rhs});
    LpOptions dual;
    dual.algorithm = LpAlgorithm::kDual;
    const LpResult d = SolveLp(m, dual);
    REQUIRE(d.status == LpResult::Status::kOptimal);
    CHECK(d.objective == doctest::Approx(bland.objective).epsilon(1e-9));
  }
}

TEST_CASE("engine warm start after a bound change matches a cold solve") {
  for (std::uint64_t seed = 400; seed < 440; ++seed) {
    CAPTURE(seed);
    const IlpProblem p = testing::RandomIlp(seed, {18, 30, false});
    LpModel m;
    for (const Variable& var : p.variables()) {
      m.objective.push_back(var.weight);
      m.lower.push_back(0.0);
      m.upper.push_back(1.0);
    }
    for (const Constraint& c : p.constraints()) m.rows.push_back({c.terms, c.sense, c.rhs});
    LpEngine engine(m, {Pricing::kDantzig, LpAlgorithm::kDual});
    const LpResult first = engine.Solve();
    if (first.status != LpResult::Status::kOptimal) continue;
    const LpBasis basis = engine.Basis();
    engine.SetBounds(0, 0.0, 0.0);
    const LpResult warm = engine.Resolve(basis);
    m.upper[0] = 0.0;
    const LpResult cold = SolveLp(m);
    REQUIRE(warm.status == cold.status);
    if (cold.status == LpResult::Status::kOptimal) {
      CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));
      CHECK(warm.objective <= first.objective + 1e-9);
    }
  }
}

}  // namespace
}  // namespace tabilp
