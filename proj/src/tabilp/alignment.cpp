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

#include "tabilp/alignment.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include "tabilp/error.hpp"
#include "tabilp/text.hpp"

namespace tabilp {
namespace {

// Scores element texts, reusing precomputed stem sets when the scorer is the
// built-in lexical one.
class PairScorer {
 public:
  explicit PairScorer(const Scorer& scorer)
      : scorer_(scorer),
        lexical_(dynamic_cast<const LexicalOverlapScorer*>(&scorer) != nullptr) {}

  struct Prepared {
    std::string raw;
    std::vector<std::string> stems;
  };

  Prepared Prepare(const std::string& s) const {
    return Prepared{s, lexical_ ? text::ContentStems(s) : std::vector<std::string>{}};
  }

  double operator()(const Prepared& x, const Prepared& y) const {
    if (lexical_) return LexicalOverlapScorer::Overlap(x.stems, y.stems);
    return scorer_.Score(x.raw, y.raw);
  }

 private:
  const Scorer& scorer_;
  bool lexical_;
};

}  // namespace

std::string ToString(const ElementRef& e) {
  switch (e.kind) {
    case ElementKind::kTitle:
      return "T" + std::to_string(e.table);
    case ElementKind::kHeader:
      return "h" + std::to_string(e.table) + "_" + std::to_string(e.column);
    case ElementKind::kCell:
      return "t" + std::to_string(e.table) + "_" + std::to_string(e.row) + "_" +
             std::to_string(e.column);
    case ElementKind::kConstituent:
      return "q" + std::to_string(e.index);
    case ElementKind::kOption:
      return "a" + std::to_string(e.index);
  }
  return "?";
}

std::string_view ToString(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kCellCellInter: return "cell-cell-inter";
    case EdgeKind::kCellCellIntra: return "cell-cell-intra";
    case EdgeKind::kCellConstituent: return "cell-constituent";
    case EdgeKind::kHeaderConstituent: return "header-constituent";
    case EdgeKind::kCellOption: return "cell-option";
    case EdgeKind::kHeaderOption: return "header-option";
    case EdgeKind::kTitleConstituent: return "title-constituent";
    case EdgeKind::kTitleOption: return "title-option";
  }
  return "?";
}

double LexicalOverlapScorer::Overlap(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) /
         static_cast<double>(std::max(a.size(), b.size()));
}

double LexicalOverlapScorer::Score(std::string_view x, std::string_view y) const {
  return Overlap(text::ContentStems(x), text::ContentStems(y));
}

std::shared_ptr<const Scorer> MakeScorer(std::string_view name) {
  if (name == "lexical") return std::make_shared<LexicalOverlapScorer>();
  ThrowInvalid("unknown scorer '" + std::string(name) + "'");
}

double Score(std::string_view x, std::string_view y) {
  return LexicalOverlapScorer().Score(x, y);
}

void AlignmentConfig::Validate() const {
  const std::pair<const char*, double> all[] = {
      {"MinCellCellAlignment", min_cell_cell},
      {"MinTitleTitleAlignment", min_title_title},
      {"MinCellQConsAlignment", min_cell_qcons},
      {"MinTitleQConsAlignment", min_title_qcons},
      {"MinCellQChoiceAlignment", min_cell_qchoice},
      {"MinTitleQChoiceAlignment", min_title_qchoice},
      {"MinCellQChoiceConsAlignment", min_cell_qchoice_cons},
      {"MinTitleQChoiceConsAlignment", min_title_qchoice_cons},
      {"MinActiveCellAggrAlignment", min_active_cell_aggr},
      {"MinActiveTitleAggrAlignment", min_active_title_aggr},
  };
  for (const auto& [name, v] : all) {
    if (!(v >= 0.0 && v <= 1.0)) {
      ThrowInvalid(std::string(name) + " must lie in [0, 1]");
    }
  }
}

double AlignmentConfig::ThresholdFor(EdgeKind kind) const {
  switch (kind) {
    case EdgeKind::kCellCellInter:
    case EdgeKind::kCellCellIntra:
      return min_cell_cell;
    case EdgeKind::kCellConstituent:
      return min_cell_qcons;
    case EdgeKind::kHeaderConstituent:
    case EdgeKind::kTitleConstituent:
      return min_title_qcons;
    case EdgeKind::kCellOption:
      return min_cell_qchoice;
    case EdgeKind::kHeaderOption:
    case EdgeKind::kTitleOption:
      return min_title_qchoice;
  }
  return 1.0;
}

std::vector<ScoredEdge> BuildCandidateEdges(const std::vector<Table>& tables,
                                            const QuestionInstance& q,
                                            const AlignmentConfig& cfg,
                                            const Scorer& scorer) {
  cfg.Validate();
  const PairScorer score(scorer);

  std::vector<PairScorer::Prepared> cons;
  for (const Constituent& c : q.constituents) cons.push_back(score.Prepare(c.text));
  std::vector<PairScorer::Prepared> opts;
  for (const std::string& o : q.options) opts.push_back(score.Prepare(o));

  struct Side {
    ElementRef ref;
    PairScorer::Prepared text;
  };
  std::vector<Side> titles, headers, cells;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const Table& t = tables[i];
    titles.push_back({ElementRef::Title(i), score.Prepare(t.title)});
    for (std::size_t k = 0; k < t.num_columns(); ++k) {
      headers.push_back({ElementRef::Header(i, k), score.Prepare(t.headers[k])});
    }
    for (std::size_t j = 0; j < t.num_rows(); ++j) {
      for (std::size_t k = 0; k < t.num_columns(); ++k) {
        cells.push_back({ElementRef::Cell(i, j, k), score.Prepare(t.rows[j][k])});
      }
    }
  }

  std::vector<ScoredEdge> edges;
  auto consider = [&](const ElementRef& a, const ElementRef& b, EdgeKind kind,
                      double w) {
    if (w >= cfg.ThresholdFor(kind)) edges.push_back(ScoredEdge{a, b, kind, w});
  };
  auto against_question = [&](const std::vector<Side>& side, EdgeKind to_cons,
                              EdgeKind to_opt) {
    for (const Side& s : side) {
      for (std::size_t l = 0; l < cons.size(); ++l) {
        consider(s.ref, ElementRef::Constituent(l), to_cons, score(s.text, cons[l]));
      }
      for (std::size_t m = 0; m < opts.size(); ++m) {
        consider(s.ref, ElementRef::Option(m), to_opt, score(s.text, opts[m]));
      }
    }
  };
  against_question(cells, EdgeKind::kCellConstituent, EdgeKind::kCellOption);
  against_question(headers, EdgeKind::kHeaderConstituent, EdgeKind::kHeaderOption);
  against_question(titles, EdgeKind::kTitleConstituent, EdgeKind::kTitleOption);

  for (std::size_t x = 0; x < cells.size(); ++x) {
    for (std::size_t y = x + 1; y < cells.size(); ++y) {
      const ElementRef& a = cells[x].ref;
      const ElementRef& b = cells[y].ref;
      if (a.table != b.table) {
        consider(a, b, EdgeKind::kCellCellInter, score(cells[x].text, cells[y].text));
      } else if (a.row != b.row) {
        consider(a, b, EdgeKind::kCellCellIntra, score(cells[x].text, cells[y].text));
      }
    }
  }

  std::sort(edges.begin(), edges.end(), [](const ScoredEdge& l, const ScoredEdge& r) {
    return std::tie(l.a, l.b, l.kind) < std::tie(r.a, r.b, r.kind);
  });
  return edges;
}

std::vector<ScoredEdge> BuildCandidateEdges(const std::vector<Table>& tables,
                                            const QuestionInstance& q,
                                            const AlignmentConfig& cfg) {
  LexicalOverlapScorer scorer;
  return BuildCandidateEdges(tables, q, cfg, scorer);
}

}  // namespace tabilp
