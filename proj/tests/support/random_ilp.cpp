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

#include "random_ilp.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace tabilp::testing {

IlpProblem RandomIlp(std::uint64_t seed, const RandomIlpSpec& spec) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> nvar(1, spec.max_vars);
  std::uniform_int_distribution<std::size_t> ncon(0, spec.max_constraints);
  std::uniform_int_distribution<int> small(-4, 6);
  std::uniform_real_distribution<double> real(-2.0, 3.0);
  std::bernoulli_distribution dense(0.35);
  std::uniform_int_distribution<int> sense(0, 5);

  IlpProblem p;
  const std::size_t n = nvar(rng);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = spec.integral ? static_cast<double>(small(rng)) : real(rng);
    p.AddVariable("v" + std::to_string(j), w);
  }
  const std::size_t m = ncon(rng);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Term> terms;
    double pos = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!dense(rng)) continue;
      const double c = spec.integral ? static_cast<double>(small(rng) % 4) : real(rng);
      if (c == 0.0) continue;
      terms.push_back({static_cast<VarId>(j), c});
      if (c > 0) pos += c;
    }
    // Right-hand sides near the middle of the activity range keep most
    // instances feasible but binding.
    const double rhs = spec.integral ? std::floor(pos / 2.0) : pos / 2.0;
    switch (sense(rng)) {
      case 0:
        p.AddConstraint(std::move(terms), Sense::kEq, rhs, "eq");
        break;
      case 1:
      case 2:
        p.AddConstraint(std::move(terms), Sense::kGe, rhs / 2.0, "ge");
        break;
      default:
        p.AddConstraint(std::move(terms), Sense::kLe, rhs, "le");
    }
  }
  return p;
}

}  // namespace tabilp::testing
