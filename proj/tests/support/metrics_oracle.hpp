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


// Definitional recomputation of the essential-term metrics, written from the
// textbook definitions rather than from the library code paths.

#ifndef TABILP_TESTS_METRICS_ORACLE_HPP
#define TABILP_TESTS_METRICS_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "tabilp/essential.hpp"

namespace tabilp::testing {

// Precision at the rank of each positive, averaged. Equal scores keep input
// order.
double OracleAveragePrecision(const std::vector<ScoredTerm>& items);

// Trapezoids through (recall, precision) at every distinct score cut, from
// (0, 1).
double OraclePrAuc(const std::vector<ScoredTerm>& items);

EtMetrics OracleMetrics(const std::vector<ScoredTerm>& items, double threshold);

// Random scored terms over a few questions; scores come from a coarse grid
// so ties are common.
std::vector<ScoredTerm> RandomScoredTerms(std::uint64_t seed);

}  // namespace tabilp::testing

#endif  // TABILP_TESTS_METRICS_ORACLE_HPP
