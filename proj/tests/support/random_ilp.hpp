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

// Seeded random 0/1 programs for solver oracle tests.

#ifndef TABILP_TESTS_RANDOM_ILP_HPP
#define TABILP_TESTS_RANDOM_ILP_HPP

#include <cstddef>
#include <cstdint>

#include "tabilp/ilp.hpp"

namespace tabilp::testing {

struct RandomIlpSpec {
  std::size_t max_vars = 18;
  std::size_t max_constraints = 30;
  // Integer-valued coefficients make ties (and thus tie-breaking) common.
  bool integral = true;
};

IlpProblem RandomIlp(std::uint64_t seed, const RandomIlpSpec& spec = {});

}  // namespace tabilp::testing

#endif  // TABILP_TESTS_RANDOM_ILP_HPP
