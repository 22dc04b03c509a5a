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
#include "tabilp/support.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tabilp/error.hpp"
#include "tabilp/text.hpp"

namespace tabilp {

std::size_t SupportGraph::NumElements() const {
  return tables.size() + rows.size() + columns.size() + headers.size() + cells.size() +
         constituents.size() + options.size();
}

SupportGraph SupportFromAssignment(const TableIlp& model, std::span<const std::uint8_t> x) {
  if (x.size() != model.problem.num_variables()) {
    ThrowInvalid("assignment size does not match the model");
  }
  SupportGraph g;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (!x[v]) continue;
    const auto& idx = model.keys[v].idx;
    switch (model.keys[v].kind) {
      case VarKind::kEdge: g.edges.push_back(model.edges[idx[0]]); break;
      case VarKind::kTable: g.tables.push_back(idx[0]); break;
      case VarKind::kRow: g.rows.push_back({idx[0], idx[1]}); break;
      case VarKind::kColumn: g.columns.push_back({idx[0], idx[1]}); break;
      case VarKind::kHeader: g.headers.push_back({idx[0], idx[1]}); break;
      case VarKind::kCell: g.cells.push_back(ElementRef::Cell(idx[0], idx[1], idx[2])); break;
      case VarKind::kConstituent: g.constituents.push_back(idx[0]); break;
      case VarKind::kOption: g.options.push_back(idx[0]); break;
      case VarKind::kColumnChoice: g.column_choices.push_back({idx[0], idx[1], idx[2]}); break;
      case VarKind::kTableChoice: g.table_choices.push_back({idx[0], idx[1]}); break;
      case VarKind::kWhichActive: g.which_active = true; break;
      case VarKind::kWhichAligned: g.which_aligned = true; break;
      case VarKind::kProximity: g.proximity.push_back(idx); break;
      case VarKind::kRelation: g.relations.push_back(idx); break;
      case VarKind::kCascade: g.cascade_levels.push_back(idx[0]); break;
    }
  }
  g.objective = model.problem.Objective(x);
  g.base_objective = model.problem.BaseObjective(x);
  return g;
}

SupportGraph ExtractSupportGraph(const TableIlp& model, const Solution& solution) {
  if (solution.status != SolveStatus::kOptimal) {
    ThrowInvalid("support graph needs an optimal solution, got " +
                 std::string(ToString(solution.status)));
  }
  return SupportFromAssignment(model, solution.assignment);
}

namespace {

class Auditor {
 public:
  Auditor(const SupportGraph& g, const std::vector<Table>& tables, const QuestionInstance& q,
          const ModelConfig& config)
      : g_(g), tables_(tables), q_(q), cfg_(config) {
    tables_on_.insert(g.tables.begin(), g.tables.end());
    rows_on_.insert(g.rows.begin(), g.rows.end());
    columns_on_.insert(g.columns.begin(), g.columns.end());
    headers_on_.insert(g.headers.begin(), g.headers.end());
    for (const ElementRef& c : g.cells) cells_on_.insert({c.table, c.row, c.column});
    constituents_on_.insert(g.constituents.begin(), g.constituents.end());
    options_on_.insert(g.options.begin(), g.options.end());
    cc_on_.insert(g.column_choices.begin(), g.column_choices.end());
    tc_on_.insert(g.table_choices.begin(), g.table_choices.end());
  }

  std::vector<Violation> Run() {
    Edges();
    Elements();
    Cardinalities();
    Choices();
    Which();
    Constituents();
    Relations();
    Rows();
    Tables();
    return std::move(out_);
  }

 private:
  using Cell = std::array<std::size_t, 3>;

  void Fail(Family f, std::string detail) { out_.push_back({f, std::move(detail)}); }

  static bool IsCell(const ElementRef& e) { return e.kind == ElementKind::kCell; }
  static bool IsHeader(const ElementRef& e) { return e.kind == ElementKind::kHeader; }
  static bool TableSide(const ElementRef& e) {
    return e.kind == ElementKind::kCell || e.kind == ElementKind::kHeader ||
           e.kind == ElementKind::kTitle;
  }

  // Active edges touching a table-side element, as (edge, endpoint).
  template <typename Pred>
  std::size_t CountEdges(Pred pred) const {
    std::size_t n = 0;
    for (const ScoredEdge& e : g_.edges) {
      if (pred(e)) ++n;
    }
    return n;
  }

  void Edges() {
    for (const ScoredEdge& e : g_.edges) {
      const std::string name = ToString(e.a) + "-" + ToString(e.b);
      for (const ElementRef* end : {&e.a, &e.b}) {
        const ElementRef& x = *end;
        if (IsCell(x)) {
          if (!rows_on_.count({x.table, x.row})) Fail(Family::kRowIfCell, name);
          if (!cells_on_.count({x.table, x.row, x.column})) Fail(Family::kCellActive, name);
          if (!columns_on_.count({x.table, x.column})) Fail(Family::kColumnIfEdge, name);
        } else if (IsHeader(x)) {
          if (!headers_on_.count({x.table, x.column})) Fail(Family::kHeaderIfEdge, name);
          if (!columns_on_.count({x.table, x.column})) Fail(Family::kColumnIfEdge, name);
        } else if (x.kind == ElementKind::kConstituent) {
          if (!constituents_on_.count(x.index)) Fail(Family::kConstituentIfEdge, name);
        } else if (x.kind == ElementKind::kOption) {
          if (!options_on_.count(x.index)) Fail(Family::kOptionIfEdge, name);
        }
        if (TableSide(x) && !tables_on_.count(x.table)) Fail(Family::kTableIfEdge, name);
      }
      if ((e.kind == EdgeKind::kCellOption || e.kind == EdgeKind::kHeaderOption) &&
          !cc_on_.count({e.a.table, e.a.column, e.b.index})) {
        Fail(Family::kChoiceImpliesColumnChoice, name);
      }
    }
  }

  void Elements() {
    const double cell_aggr = cfg_.alignment.min_active_cell_aggr;
    const double header_aggr = cfg_.alignment.min_active_title_aggr;
    for (const Cell& c : cells_on_) {
      const std::size_t n = CountEdges([&](const ScoredEdge& e) { return Touches(e, c); });
      if (!(double(n) >= cell_aggr)) Fail(Family::kCellActive, CellName(c));
    }
    for (const Index2& h : headers_on_) {
      const std::size_t n = CountEdges([&](const ScoredEdge& e) {
        return IsHeader(e.a) && e.a.table == h.first && e.a.column == h.second;
      });
      const std::string name = "h" + std::to_string(h.first) + "_" + std::to_string(h.second);
      if (n == 0) Fail(Family::kHeaderNeedsEdge, name);
      if (!(double(n) >= header_aggr)) Fail(Family::kHeaderActive, name);
    }
    for (const Index2& col : columns_on_) {
      const std::string name = "l" + std::to_string(col.first) + "_" + std::to_string(col.second);
      const std::size_t n = CountEdges([&](const ScoredEdge& e) {
        return InColumn(e.a, col) || (IsCell(e.b) && InColumn(e.b, col));
      });
      if (n == 0) Fail(Family::kColumnNeedsEdge, name);
      bool cell = false;
      for (const Cell& c : cells_on_) cell |= c[0] == col.first && c[2] == col.second;
      if (!cell) Fail(Family::kColumnNeedsCell, name);
      if (!tables_on_.count(col.first)) Fail(Family::kColumnImpliesTable, name);
    }
    for (std::size_t i : tables_on_) {
      const std::size_t n = CountEdges([&](const ScoredEdge& e) {
        return (TableSide(e.a) && e.a.table == i) || (IsCell(e.b) && e.b.table == i);
      });
      if (n == 0) Fail(Family::kTableNeedsEdge, "T" + std::to_string(i));
      bool col = false;
      for (const Index2& c : columns_on_) col |= c.first == i;
      if (!col) Fail(Family::kTableNeedsColumn, "T" + std::to_string(i));
    }
    for (std::size_t m : options_on_) {
      if (CountEdges([&](const ScoredEdge& e) { return IsOption(e.b, m); }) == 0) {
        Fail(Family::kOptionNeedsEdge, "a" + std::to_string(m));
      }
    }
    for (std::size_t l : constituents_on_) {
      if (CountEdges([&](const ScoredEdge& e) { return IsConstituent(e.b, l); }) == 0) {
        Fail(Family::kConstituentNeedsEdge, "q" + std::to_string(l));
      }
    }
  }

  void Cardinalities() {
    const ModelConstants& c = cfg_.constants;
    if (options_on_.size() != 1) {
      Fail(Family::kSingleOption, std::to_string(options_on_.size()) + " active options");
    }
    if (double(tables_on_.size()) > c.max_tables_to_chain) {
      Fail(Family::kMaxTables, std::to_string(tables_on_.size()) + " active tables");
    }
    std::map<std::size_t, std::size_t> rows_per_table;
    for (const Index2& r : rows_on_) ++rows_per_table[r.first];
    for (const auto& [i, n] : rows_per_table) {
      if (double(n) > c.max_rows_per_table) {
        Fail(Family::kMaxRowsPerTable, "T" + std::to_string(i));
      }
    }
    if (double(constituents_on_.size()) < c.min_active_qcons) {
      Fail(Family::kMinActiveQCons, std::to_string(constituents_on_.size()) +
                                        " active constituents");
    }
  }

  void Choices() {
    const ModelConstants& c = cfg_.constants;
    std::map<Index2, std::size_t> per_table_option;
    for (const auto& cc : cc_on_) {
      ++per_table_option[{cc[0], cc[2]}];
      const std::string name = "l" + std::to_string(cc[0]) + "_" + std::to_string(cc[1]) +
                               ",a" + std::to_string(cc[2]);
      const std::size_t n = CountEdges([&](const ScoredEdge& e) {
        return (e.kind == EdgeKind::kCellOption || e.kind == EdgeKind::kHeaderOption) &&
               e.a.table == cc[0] && e.a.column == cc[1] && e.b.index == cc[2];
      });
      if (n == 0) Fail(Family::kColumnChoiceNeedsEdge, name);
      if (!tc_on_.count({cc[0], cc[2]})) Fail(Family::kColumnChoiceImpliesTableChoice, name);
    }
    for (const auto& [im, n] : per_table_option) {
      const std::string name = "T" + std::to_string(im.first) + ",a" + std::to_string(im.second);
      if (double(n) > c.max_active_column_choice_alignments) {
        Fail(Family::kMaxColumnsPerChoice, name);
      }
      if (double(n) > c.max_active_choice_column_vars) Fail(Family::kMaxChoiceColumnVars, name);
    }
    std::map<std::size_t, std::size_t> tables_per_option;
    for (const Index2& tc : tc_on_) {
      ++tables_per_option[tc.second];
      const std::string name = "T" + std::to_string(tc.first) + ",a" + std::to_string(tc.second);
      const std::size_t non_choice = CountEdges([&](const ScoredEdge& e) {
        return NonChoice(e) && (e.a.table == tc.first || (IsCell(e.b) && e.b.table == tc.first));
      });
      if (non_choice == 0) Fail(Family::kTableChoiceNeedsNonChoice, name);
      if (!per_table_option.count(tc)) Fail(Family::kTableChoiceNeedsColumnChoice, name);
    }
    for (const auto& [m, n] : tables_per_option) {
      if (double(n) > c.max_active_table_choice_alignments) {
        Fail(Family::kMaxTablesPerChoice, "a" + std::to_string(m));
      }
    }
  }

  void Which() {
    if (!cfg_.options.which_terms || !WhichPosition(q_)) {
      if (g_.which_active || g_.which_aligned) {
        Fail(Family::kWhichTermActive, "which variables active without a which term");
      }
      return;
    }
    if (!g_.which_active) Fail(Family::kWhichTermActive, "which term present but inactive");
    if (!g_.which_aligned) return;
    const std::string span =
        WhichSpan(q_, static_cast<std::size_t>(cfg_.constants.which_term_span));
    const auto scorer = MakeScorer(cfg_.alignment.scorer);
    bool ok = false;
    if (!span.empty()) {
      for (const ScoredEdge& e : g_.edges) {
        if (e.b.kind != ElementKind::kOption) continue;
        if (scorer->Score(Text(e.a), span) > cfg_.constants.min_alignment_which_term) ok = true;
      }
    }
    if (!ok) Fail(Family::kWhichTermAligned, "no qualifying option alignment");
  }

  void Constituents() {
    const ModelConstants& c = cfg_.constants;
    std::map<std::size_t, std::size_t> per_constituent;
    std::map<Cell, std::vector<std::size_t>> per_cell;
    for (const ScoredEdge& e : g_.edges) {
      if (e.b.kind != ElementKind::kConstituent) continue;
      ++per_constituent[e.b.index];
      if (IsCell(e.a)) per_cell[{e.a.table, e.a.row, e.a.column}].push_back(e.b.index);
    }
    for (const auto& [l, n] : per_constituent) {
      if (double(n) > c.max_alignments_per_qcons) {
        Fail(Family::kMaxAlignmentsPerQCons, "q" + std::to_string(l));
      }
    }
    for (const auto& [cell, ls] : per_cell) {
      for (std::size_t x = 0; x < ls.size(); ++x) {
        for (std::size_t y = x + 1; y < ls.size(); ++y) {
          const std::size_t p1 = q_.constituents[ls[x]].position;
          const std::size_t p2 = q_.constituents[ls[y]].position;
          const double dist = p1 > p2 ? double(p1 - p2) : double(p2 - p1);
          if (dist > c.qcons_coalign_max_dist) Fail(Family::kCoalignDistance, CellName(cell));
        }
      }
    }
    for (const auto& p : g_.proximity) {
      const Cell cell{p[0], p[1], p[2]};
      auto aligned = [&](std::size_t l) {
        return CountEdges([&](const ScoredEdge& e) {
                 return IsCell(e.a) && e.a.table == p[0] && e.a.row == p[1] &&
                        e.a.column == p[2] && IsConstituent(e.b, l);
               }) > 0;
      };
      if (!aligned(p[3]) || !aligned(p[4])) Fail(Family::kProximityBoost, CellName(cell));
    }
  }

  void Relations() {
    if (!cfg_.options.relation_matching) {
      if (!g_.relations.empty()) Fail(Family::kRelationColumns, "relation matching disabled");
      return;
    }
    std::set<Index2> relation_columns;
    for (const auto& r : RelationCandidates(tables_, q_)) {
      relation_columns.insert({r[0], r[1]});
      relation_columns.insert({r[0], r[2]});
    }
    std::set<Index2> covered;
    for (const auto& r : g_.relations) {
      const std::string name = "T" + std::to_string(r[0]) + ":" + std::to_string(r[1]) + "-" +
                               std::to_string(r[2]);
      if (!columns_on_.count({r[0], r[1]}) || !columns_on_.count({r[0], r[2]})) {
        Fail(Family::kRelationColumns, name);
      }
      for (const ScoredEdge& e : g_.edges) {
        if (IsCell(e.a) && e.a.table == r[0] && e.a.column == r[1] &&
            e.b.kind == ElementKind::kConstituent && e.b.index <= r[3]) {
          Fail(Family::kRelationPosition, name);
        }
      }
      covered.insert({r[0], r[1]});
      covered.insert({r[0], r[2]});
    }
    for (const Index2& col : columns_on_) {
      if (relation_columns.count(col) && !covered.count(col)) {
        Fail(Family::kColumnNeedsRelation,
             "l" + std::to_string(col.first) + "_" + std::to_string(col.second));
      }
    }
  }

  void Rows() {
    const double min_cells = cfg_.constants.min_active_cells_per_row;
    for (const Index2& r : rows_on_) {
      const std::string name = "r" + std::to_string(r.first) + "_" + std::to_string(r.second);
      auto in_row = [&](const ElementRef& x) {
        return IsCell(x) && x.table == r.first && x.row == r.second;
      };
      if (CountEdges([&](const ScoredEdge& e) { return in_row(e.a) || in_row(e.b); }) == 0) {
        Fail(Family::kRowNeedsCell, name);
      }
      std::size_t cells = 0;
      for (const Cell& c : cells_on_) cells += c[0] == r.first && c[1] == r.second;
      if (double(cells) < min_cells) Fail(Family::kMinCellsPerRow, name);
      const std::size_t non_choice = CountEdges([&](const ScoredEdge& e) {
        return (in_row(e.a) || in_row(e.b)) && e.b.kind != ElementKind::kOption;
      });
      if (non_choice == 0) Fail(Family::kRowNonChoice, name);
      const std::size_t non_question = CountEdges([&](const ScoredEdge& e) {
        return (in_row(e.a) || in_row(e.b)) && e.b.kind != ElementKind::kConstituent;
      });
      if (non_question == 0) Fail(Family::kRowNonQuestion, name);
    }
    for (const Index2& r1 : rows_on_) {
      for (const Index2& r2 : rows_on_) {
        if (r1.first != r2.first || r1.second == r2.second) continue;
        const std::size_t i = r1.first;
        for (std::size_t k = 0; k < tables_[i].num_columns(); ++k) {
          if (cells_on_.count({i, r1.second, k}) && !cells_on_.count({i, r2.second, k})) {
            Fail(Family::kRowSignature, CellName({i, r1.second, k}));
          }
        }
        if (r1.second < r2.second) {
          bool differ = false;
          for (std::size_t k = 0; k < tables_[i].num_columns(); ++k) {
            if (!columns_on_.count({i, k})) continue;
            if (text::ContentStems(tables_[i].rows[r1.second][k]) !=
                text::ContentStems(tables_[i].rows[r2.second][k])) {
              differ = true;
            }
          }
          if (!differ) {
            Fail(Family::kRowsDiffer, "r" + std::to_string(i) + "_" + std::to_string(r1.second) +
                                          "/" + std::to_string(r2.second));
          }
        }
      }
    }
  }

  void Tables() {
    for (std::size_t i : tables_on_) {
      for (std::size_t i2 : tables_on_) {
        if (i2 <= i) continue;
        const std::size_t n = CountEdges([&](const ScoredEdge& e) {
          return e.kind == EdgeKind::kCellCellInter &&
                 ((e.a.table == i && e.b.table == i2) || (e.a.table == i2 && e.b.table == i));
        });
        if (n == 0) {
          Fail(Family::kInterTableLink, "T" + std::to_string(i) + "/T" + std::to_string(i2));
        }
      }
    }
  }

  static bool Touches(const ScoredEdge& e, const Cell& c) {
    auto at = [&](const ElementRef& x) {
      return IsCell(x) && x.table == c[0] && x.row == c[1] && x.column == c[2];
    };
    return at(e.a) || at(e.b);
  }
  static bool InColumn(const ElementRef& x, const Index2& col) {
    return (IsCell(x) || IsHeader(x)) && x.table == col.first && x.column == col.second;
  }
  static bool IsOption(const ElementRef& x, std::size_t m) {
    return x.kind == ElementKind::kOption && x.index == m;
  }
  static bool IsConstituent(const ElementRef& x, std::size_t l) {
    return x.kind == ElementKind::kConstituent && x.index == l;
  }
  // Cell-cell, cell-constituent and header-constituent edges.
  static bool NonChoice(const ScoredEdge& e) {
    return e.kind == EdgeKind::kCellCellInter || e.kind == EdgeKind::kCellCellIntra ||
           e.kind == EdgeKind::kCellConstituent || e.kind == EdgeKind::kHeaderConstituent;
  }
  static std::string CellName(const Cell& c) {
    return "t" + std::to_string(c[0]) + "_" + std::to_string(c[1]) + "_" + std::to_string(c[2]);
  }
  const std::string& Text(const ElementRef& e) const {
    const Table& t = tables_.at(e.table);
    if (e.kind == ElementKind::kTitle) return t.title;
    if (e.kind == ElementKind::kHeader) return t.headers.at(e.column);
    return t.rows.at(e.row).at(e.column);
  }

  const SupportGraph& g_;
  const std::vector<Table>& tables_;
  const QuestionInstance& q_;
  const ModelConfig& cfg_;
  std::set<std::size_t> tables_on_;
  std::set<Index2> rows_on_;
  std::set<Index2> columns_on_;
  std::set<Index2> headers_on_;
  std::set<Cell> cells_on_;
  std::set<std::size_t> constituents_on_;
  std::set<std::size_t> options_on_;
  std::set<std::array<std::size_t, 3>> cc_on_;
  std::set<Index2> tc_on_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> Audit(const SupportGraph& graph, const std::vector<Table>& tables,
                             const QuestionInstance& q, const ModelConfig& config) {
  return Auditor(graph, tables, q, config).Run();
}

}  // namespace tabilp
