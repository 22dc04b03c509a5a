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

#ifndef TABILP_ALIGNMENT_HPP
#define TABILP_ALIGNMENT_HPP

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tabilp/kb.hpp"

namespace tabilp {

enum class ElementKind : unsigned char {
  kTitle,
  kHeader,
  kCell,
  kConstituent,
  kOption,
};

// Reference to one element of a (tables, question) instance. Unused fields
// stay zero so the defaulted ordering is the canonical order.
struct ElementRef {
  ElementKind kind = ElementKind::kCell;
  std::size_t table = 0;
  std::size_t row = 0;
  std::size_t column = 0;
  std::size_t index = 0;  // constituent l or option m

  static ElementRef Title(std::size_t i) { return {ElementKind::kTitle, i, 0, 0, 0}; }
  static ElementRef Header(std::size_t i, std::size_t k) {
    return {ElementKind::kHeader, i, 0, k, 0};
  }
  static ElementRef Cell(std::size_t i, std::size_t j, std::size_t k) {
    return {ElementKind::kCell, i, j, k, 0};
  }
  static ElementRef Constituent(std::size_t l) {
    return {ElementKind::kConstituent, 0, 0, 0, l};
  }
  static ElementRef Option(std::size_t m) { return {ElementKind::kOption, 0, 0, 0, m}; }

  auto operator<=>(const ElementRef&) const = default;
};

std::string ToString(const ElementRef& e);

enum class EdgeKind : unsigned char {
  kCellCellInter,  // cells of two different tables
  kCellCellIntra,  // cells of two different rows of one table
  kCellConstituent,
  kHeaderConstituent,
  kCellOption,
  kHeaderOption,
  kTitleConstituent,
  kTitleOption,
};

std::string_view ToString(EdgeKind kind);

struct ScoredEdge {
  ElementRef a;  // table-side endpoint (the smaller cell for cell-cell)
  ElementRef b;
  EdgeKind kind = EdgeKind::kCellConstituent;
  double weight = 0.0;

  bool operator==(const ScoredEdge&) const = default;
};

// Pairwise similarity in [0, 1]. Implementations must be symmetric and
// thread-safe.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double Score(std::string_view x, std::string_view y) const = 0;
  virtual std::string name() const = 0;
};

// |T(x) & T(y)| / max(|T(x)|, |T(y)|) over content stems; 0 if either is empty.
class LexicalOverlapScorer final : public Scorer {
 public:
  double Score(std::string_view x, std::string_view y) const override;
  std::string name() const override { return "lexical"; }

  static double Overlap(const std::vector<std::string>& sorted_a,
                        const std::vector<std::string>& sorted_b);
};

std::shared_ptr<const Scorer> MakeScorer(std::string_view name);

struct AlignmentConfig {
  double min_cell_cell = 0.6;
  double min_title_title = 0.0;
  double min_cell_qcons = 0.1;
  double min_title_qcons = 0.1;
  double min_cell_qchoice = 0.2;
  double min_title_qchoice = 0.2;
  double min_cell_qchoice_cons = 0.4;
  double min_title_qchoice_cons = 0.4;
  double min_active_cell_aggr = 0.1;
  double min_active_title_aggr = 0.1;
  std::string scorer = "lexical";

  void Validate() const;
  // Gate applied to an edge of the given kind.
  double ThresholdFor(EdgeKind kind) const;
};

double Score(std::string_view x, std::string_view y);

// Every pair of the eight edge kinds whose score meets its threshold, sorted
// canonically by (a, b, kind).
std::vector<ScoredEdge> BuildCandidateEdges(const std::vector<Table>& tables,
                                            const QuestionInstance& q,
                                            const AlignmentConfig& cfg,
                                            const Scorer& scorer);
std::vector<ScoredEdge> BuildCandidateEdges(const std::vector<Table>& tables,
                                            const QuestionInstance& q,
                                            const AlignmentConfig& cfg);

}  // namespace tabilp

#endif  // TABILP_ALIGNMENT_HPP
