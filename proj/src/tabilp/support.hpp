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
// Support graphs: the active part of a solved model, and an audit that
// re-checks every structural family directly on the activity pattern without
// looking at the generated constraint rows.

#ifndef TABILP_SUPPORT_HPP
#define TABILP_SUPPORT_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tabilp/alignment.hpp"
#include "tabilp/kb.hpp"
#include "tabilp/model.hpp"
#include "tabilp/solver.hpp"

namespace tabilp {

using Index2 = std::pair<std::size_t, std::size_t>;

struct SupportGraph {
  std::vector<std::size_t> tables;
  std::vector<Index2> rows;       // (i, j)
  std::vector<Index2> columns;    // (i, k)
  std::vector<Index2> headers;    // (i, k)
  std::vector<ElementRef> cells;
  std::vector<std::size_t> constituents;
  std::vector<std::size_t> options;
  std::vector<ScoredEdge> edges;  // raw alignment scores

  std::vector<std::array<std::size_t, 3>> column_choices;  // (i, k, m)
  std::vector<Index2> table_choices;                       // (i, m)
  bool which_active = false;
  bool which_aligned = false;
  std::vector<std::array<std::size_t, 5>> proximity;  // (i, j, k, l, l')
  std::vector<std::array<std::size_t, 5>> relations;  // (i, k, k', l, l')
  std::vector<std::size_t> cascade_levels;

  double objective = 0.0;       // full objective, cascade terms included
  double base_objective = 0.0;  // without cascade terms

  // Number of active element (unary) nodes.
  std::size_t NumElements() const;
};

// Any assignment, feasible or not.
SupportGraph SupportFromAssignment(const TableIlp& model,
                                   std::span<const std::uint8_t> assignment);

// Throws unless the solution is optimal.
SupportGraph ExtractSupportGraph(const TableIlp& model, const Solution& solution);

struct Violation {
  Family family;
  std::string detail;

  std::string_view tag() const { return Label(family); }
};

std::vector<Violation> Audit(const SupportGraph& graph, const std::vector<Table>& tables,
                             const QuestionInstance& q, const ModelConfig& config);

}  // namespace tabilp

#endif  // TABILP_SUPPORT_HPP
