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

#include "tabilp/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tabilp/error.hpp"
#include "tabilp/text.hpp"

namespace tabilp {
namespace {

constexpr std::string_view kLabels[] = {
    "If any cell in row j of table i is active, the row should be active.",
    "If the row j of table i is active, at least one cell in that row must be active as well.",
    "A column header should be active if any of the basic variables with one end in this "
    "column header are active.",
    "If the column header is active, at least one basic variable with one end in the header "
    "must be active.",
    "Column k is active if at least one of the basic variables with one end in this column "
    "are active.",
    "If the column k is active, at least one of the basic variables with one end in this "
    "column should be active.",
    "If a basic variable with one end in table i is active, the table variable is active.",
    "If the table i is active, at least one of the basic variables with one end in the table "
    "should be active.",
    "If any of the basic variables with one end in option a_m are on, the option should be "
    "active as well.",
    "If the question option a_m is active, there is at least one active basic element "
    "connected to it.",
    "If any of the basic variables with one end in the constituent q_l are on, the "
    "constituent must be active.",
    "If the constituent q_l is active, at least one basic variable connected to it must be "
    "active.",
    "Choose only a single option.",
    "There is an upper-bound on the number of active tables (MaxTablesToChain).",
    "The number of active rows in each table is upper-bounded (MaxRowsPerTable).",
    "The number of active constituents in each question is lower-bounded (MinActiveQCons).",
    "A cell is active if and only if the sum of coefficients of all external alignment to it "
    "is at least a minimum specified value (MinActiveCellAggrAlignment).",
    "A header is active if and only if the sum of coefficients of all external alignment to "
    "it is at least a minimum specified value (MinActiveTitleAggrAlignment).",
    "If a column is active, at least one of its cells must be active as well.",
    "At most a certain number of columns can be active for a single option "
    "(MaxActiveColumnChoiceAlignments).",
    "If a column is active for a choice, the table is active too.",
    "If a table is active for a choice, there must exist an active column for choice.",
    "If a table is active for a choice, there must be some non-choice alignment.",
    "Answer should be present in at most a certain number of tables "
    "(MaxActiveTableChoiceAlignments).",
    "If a cell in a column, or its header is aligned with a question option, the column is "
    "active for question option as well.",
    "If a column is active for an option, there must exist an alignment to header or cell in "
    "the column.",
    "At most a certain number of columns may be active for question option in a table "
    "(MaxActiveChoiceColumnVars).",
    "If a column is active for a choice, the table is active for an option as well.",
    "If the table is active for an option, at least one column is active for a choice.",
    "Activate whichTermIsActive if there is a \"which\" term in the question.",
    "whichTermIsAligned needs an active option alignment from a table element that aligns "
    "well with the which terms (MinAlignmentWhichTerm).",
    "A question constituent may not align to more than a certain number of cells "
    "(MaxAlignmentsPerQCons).",
    "Disallow aligning a cell to two question constituents if they are too far apart "
    "(qConsCoalignMaxDist).",
    "cellProximityBoost needs the cell to align to both nearby question constituents.",
    "If a relation match is active, both the columns for the relation must be active.",
    "If a column is active, a relation match connecting to the column must be active.",
    "If a relation match is active, the column cannot align to the question in an invalid "
    "position.",
    "If a row is active, at least a certain number of its cells must be active "
    "(MinActiveCellsPerRow).",
    "If row is active, it must have non-choice alignments.",
    "If row is active, it must have non-question alignments.",
    "If two rows of a table are active, the corresponding active cell variables across the "
    "two rows must match.",
    "If two rows are active, then at least one active column in which they differ (in "
    "tokenized form) must also be active.",
    "If a table is active and another table is also active, at least one inter-table active "
    "variable must be active.",
    "Essential question terms must be used.",
    "A cascade level is reached only if all of its essential terms are used.",
    "Option disabled.",
    "Option forced.",
};

static_assert(std::size(kLabels) == static_cast<std::size_t>(Family::kOptionForced) + 1);

void PushUnique(std::vector<std::size_t>& v, std::size_t e) {
  if (v.empty() || v.back() != e) v.push_back(e);
}

bool IsCellCell(EdgeKind k) {
  return k == EdgeKind::kCellCellInter || k == EdgeKind::kCellCellIntra;
}

bool IsOptionEdge(EdgeKind k) {
  return k == EdgeKind::kCellOption || k == EdgeKind::kHeaderOption ||
         k == EdgeKind::kTitleOption;
}

const std::string& ElementText(const std::vector<Table>& tables, const ElementRef& e) {
  const Table& t = tables.at(e.table);
  switch (e.kind) {
    case ElementKind::kTitle: return t.title;
    case ElementKind::kHeader: return t.headers.at(e.column);
    case ElementKind::kCell: return t.rows.at(e.row).at(e.column);
    default: ThrowInternal("element has no table text");
  }
}

}  // namespace

std::string_view Label(Family f) { return kLabels[static_cast<std::size_t>(f)]; }

std::optional<Family> FamilyFromLabel(std::string_view label) {
  for (std::size_t i = 0; i < std::size(kLabels); ++i) {
    if (kLabels[i] == label) return static_cast<Family>(i);
  }
  return std::nullopt;
}

void ModelConfig::Validate() const {
  alignment.Validate();
  const ModelConstants& c = constants;
  const double counts[] = {c.max_tables_to_chain,      c.qcons_coalign_max_dist,
                           c.which_term_span,          c.max_alignments_per_qcons,
                           c.max_alignments_per_cell,  c.max_rows_per_table,
                           c.min_active_qcons,         c.max_active_column_choice_alignments,
                           c.max_active_choice_column_vars, c.min_active_cells_per_row,
                           c.max_active_table_choice_alignments};
  for (double v : counts) {
    if (!std::isfinite(v) || v < 0) ThrowInvalid("model count constants must be >= 0");
  }
  if (!(c.min_alignment_which_term >= 0.0 && c.min_alignment_which_term <= 1.0)) {
    ThrowInvalid("MinAlignmentWhichTerm must be in [0, 1]");
  }
  const VariableWeights& w = weights;
  const double ws[] = {w.table, w.row, w.column, w.header, w.cell, w.constituent, w.option,
                       w.cell_cell_inter, w.cell_cell_intra_shift, w.which_term_active,
                       w.which_term_aligned, c.relation_match_coeff,
                       c.empty_relation_match_coeff, c.no_relation_match_coeff};
  for (double v : ws) {
    if (!std::isfinite(v)) ThrowInvalid("weights must be finite");
  }
}

std::optional<VarId> TableIlp::Find(const VarKey& key) const {
  auto it = index.find(key);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

VarId TableIlp::Add(const VarKey& key, std::string name, double weight, bool cascade) {
  if (index.count(key)) ThrowInternal("duplicate variable " + name);
  const VarId v = problem.AddVariable(std::move(name), weight, cascade);
  keys.push_back(key);
  index.emplace(key, v);
  return v;
}

std::size_t TableIlp::AddRow(std::vector<Term> terms, Sense sense, double rhs, Family family) {
  return problem.AddConstraint(std::move(terms), sense, rhs, std::string(Label(family)));
}

std::string VarName(const VarKey& key, const std::vector<ScoredEdge>& edges) {
  const auto& x = key.idx;
  auto s = [](std::size_t v) { return std::to_string(v); };
  switch (key.kind) {
    case VarKind::kEdge: {
      const ScoredEdge& e = edges.at(x[0]);
      return "y(" + ToString(e.a) + "," + ToString(e.b) + ")";
    }
    case VarKind::kTable: return "x(T" + s(x[0]) + ")";
    case VarKind::kRow: return "x(r" + s(x[0]) + "_" + s(x[1]) + ")";
    case VarKind::kColumn: return "x(l" + s(x[0]) + "_" + s(x[1]) + ")";
    case VarKind::kHeader: return "x(h" + s(x[0]) + "_" + s(x[1]) + ")";
    case VarKind::kCell: return "x(t" + s(x[0]) + "_" + s(x[1]) + "_" + s(x[2]) + ")";
    case VarKind::kConstituent: return "x(q" + s(x[0]) + ")";
    case VarKind::kOption: return "x(a" + s(x[0]) + ")";
    case VarKind::kColumnChoice:
      return "y(l" + s(x[0]) + "_" + s(x[1]) + ",a" + s(x[2]) + ")";
    case VarKind::kTableChoice: return "y(T" + s(x[0]) + ",a" + s(x[1]) + ")";
    case VarKind::kWhichActive: return "whichTermIsActive";
    case VarKind::kWhichAligned: return "whichTermIsAligned";
    case VarKind::kProximity:
      return "cellProximityBoost(t" + s(x[0]) + "_" + s(x[1]) + "_" + s(x[2]) + ",q" + s(x[3]) +
             ",q" + s(x[4]) + ")";
    case VarKind::kRelation:
      return "relationMatch(l" + s(x[0]) + "_" + s(x[1]) + ",l" + s(x[0]) + "_" + s(x[2]) +
             ",q" + s(x[3]) + ",q" + s(x[4]) + ")";
    case VarKind::kCascade: return "z" + s(x[0]);
  }
  return "?";
}

TableIlp BuildVariables(const std::vector<Table>& tables, const QuestionInstance& q,
                        std::vector<ScoredEdge> edges, const VariableWeights& weights) {
  TableIlp model;
  model.edges = std::move(edges);
  model.num_options = q.options.size();
  model.num_constituents = q.constituents.size();

  std::set<VarKey> unary;
  auto table_side = [&](const ElementRef& e) {
    unary.insert({VarKind::kTable, {e.table}});
    if (e.kind == ElementKind::kHeader) {
      unary.insert({VarKind::kHeader, {e.table, e.column}});
      unary.insert({VarKind::kColumn, {e.table, e.column}});
    } else if (e.kind == ElementKind::kCell) {
      unary.insert({VarKind::kCell, {e.table, e.row, e.column}});
      unary.insert({VarKind::kRow, {e.table, e.row}});
      unary.insert({VarKind::kColumn, {e.table, e.column}});
    }
  };
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    const ScoredEdge& edge = model.edges[e];
    if (edge.a.table >= tables.size() ||
        (IsCellCell(edge.kind) && edge.b.table >= tables.size())) {
      ThrowInvalid("edge references an unknown table");
    }
    double w = edge.weight;
    if (edge.kind == EdgeKind::kCellCellInter) w = weights.cell_cell_inter;
    if (edge.kind == EdgeKind::kCellCellIntra) w = edge.weight + weights.cell_cell_intra_shift;
    model.Add({VarKind::kEdge, {e}}, VarName({VarKind::kEdge, {e}}, model.edges), w);

    table_side(edge.a);
    if (IsCellCell(edge.kind)) {
      table_side(edge.b);
    } else if (edge.b.kind == ElementKind::kConstituent) {
      if (edge.b.index >= q.constituents.size()) ThrowInvalid("edge references unknown constituent");
      unary.insert({VarKind::kConstituent, {edge.b.index}});
    } else {
      if (edge.b.index >= q.options.size()) ThrowInvalid("edge references unknown option");
      unary.insert({VarKind::kOption, {edge.b.index}});
    }
  }
  for (const VarKey& key : unary) {
    double w = 0.0;
    switch (key.kind) {
      case VarKind::kTable: w = weights.table; break;
      case VarKind::kRow: w = weights.row; break;
      case VarKind::kColumn: w = weights.column; break;
      case VarKind::kHeader: w = weights.header; break;
      case VarKind::kCell: w = weights.cell; break;
      case VarKind::kConstituent: w = weights.constituent; break;
      case VarKind::kOption: w = weights.option; break;
      default: break;
    }
    model.Add(key, VarName(key, model.edges), w);
  }
  model.base_variables = model.problem.num_variables();
  return model;
}

IncidenceSets BuildIncidenceSets(const std::vector<Table>& tables, const QuestionInstance& q,
                                 const std::vector<ScoredEdge>& edges) {
  (void)tables;
  (void)q;
  IncidenceSets s;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const ScoredEdge& edge = edges[e];
    const ElementRef& a = edge.a;
    auto cell_sets = [&](const ElementRef& c, bool non_choice, bool non_question) {
      PushUnique(s.E[{c.table, c.row, c.column}], e);
      PushUnique(s.C[{c.table, c.column}], e);
      PushUnique(s.R[{c.table, c.row}], e);
      if (non_choice) PushUnique(s.L[{c.table, c.row}], e);
      if (non_question) PushUnique(s.K[{c.table, c.row}], e);
      PushUnique(s.T[c.table], e);
      if (non_choice) PushUnique(s.N[c.table], e);
    };
    switch (edge.kind) {
      case EdgeKind::kCellCellInter:
      case EdgeKind::kCellCellIntra:
        cell_sets(a, true, true);
        cell_sets(edge.b, true, true);
        if (edge.kind == EdgeKind::kCellCellInter) {
          s.inter[{std::min(a.table, edge.b.table), std::max(a.table, edge.b.table)}]
              .push_back(e);
        }
        break;
      case EdgeKind::kCellConstituent:
        cell_sets(a, true, false);
        s.Q[edge.b.index].push_back(e);
        break;
      case EdgeKind::kCellOption:
        cell_sets(a, false, true);
        s.O[edge.b.index].push_back(e);
        s.M[{a.table, a.column, edge.b.index}].push_back(e);
        break;
      case EdgeKind::kHeaderConstituent:
        s.H[{a.table, a.column}].push_back(e);
        PushUnique(s.C[{a.table, a.column}], e);
        PushUnique(s.T[a.table], e);
        PushUnique(s.N[a.table], e);
        s.Q[edge.b.index].push_back(e);
        break;
      case EdgeKind::kHeaderOption:
        s.H[{a.table, a.column}].push_back(e);
        PushUnique(s.C[{a.table, a.column}], e);
        PushUnique(s.T[a.table], e);
        s.O[edge.b.index].push_back(e);
        s.M[{a.table, a.column, edge.b.index}].push_back(e);
        break;
      case EdgeKind::kTitleConstituent:
        PushUnique(s.T[a.table], e);
        s.Q[edge.b.index].push_back(e);
        break;
      case EdgeKind::kTitleOption:
        PushUnique(s.T[a.table], e);
        s.O[edge.b.index].push_back(e);
        break;
    }
  }
  return s;
}

std::optional<std::size_t> WhichPosition(const QuestionInstance& q) {
  for (const text::Token& t : text::Tokenize(q.text)) {
    if (t.text == "which") return t.position;
  }
  return std::nullopt;
}

std::string WhichSpan(const QuestionInstance& q, std::size_t span) {
  const auto pos = WhichPosition(q);
  if (!pos) return {};
  std::string out;
  std::size_t taken = 0;
  for (const Constituent& c : q.constituents) {
    if (taken == span) break;
    if (c.position <= *pos) continue;
    if (!out.empty()) out += ' ';
    out += c.text;
    ++taken;
  }
  return out;
}

namespace {

// True if some trigger phrase occupies raw token positions strictly between
// `from` and `to`.
bool TriggerBetween(const std::vector<text::Token>& tokens,
                    const std::vector<std::vector<std::string>>& triggers, std::size_t from,
                    std::size_t to) {
  for (const auto& phrase : triggers) {
    if (phrase.empty()) continue;
    for (std::size_t p = 0; p + phrase.size() <= tokens.size(); ++p) {
      if (tokens[p].position <= from || tokens[p + phrase.size() - 1].position >= to) continue;
      bool match = true;
      for (std::size_t t = 0; t < phrase.size() && match; ++t) {
        match = tokens[p + t].text == phrase[t];
      }
      if (match) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::array<std::size_t, 5>> RelationCandidates(const std::vector<Table>& tables,
                                                           const QuestionInstance& q) {
  const std::vector<text::Token> tokens = text::Tokenize(q.text);
  std::set<std::array<std::size_t, 5>> out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (const RelationDecl& d : tables[i].relations) {
      std::vector<std::vector<std::string>> triggers;
      for (const std::string& t : d.triggers) {
        std::vector<std::string> phrase;
        for (const text::Token& tok : text::Tokenize(t)) phrase.push_back(tok.text);
        triggers.push_back(std::move(phrase));
      }
      for (std::size_t l1 = 0; l1 < q.constituents.size(); ++l1) {
        for (std::size_t l2 = l1 + 1; l2 < q.constituents.size(); ++l2) {
          if (TriggerBetween(tokens, triggers, q.constituents[l1].position,
                             q.constituents[l2].position)) {
            out.insert({i, d.column_a, d.column_b, l1, l2});
          }
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

void BuildConstraints(TableIlp& m, const std::vector<Table>& tables, const QuestionInstance& q,
                      const IncidenceSets& sets, const ModelConfig& config) {
  config.Validate();
  const ModelConstants& c = config.constants;
  const VariableWeights& w = config.weights;
  auto ev = [&](std::size_t e) { return *m.EdgeVar(e); };
  auto sum_edges = [&](const std::vector<std::size_t>& es, double coef = 1.0) {
    std::vector<Term> t;
    t.reserve(es.size() + 2);
    for (std::size_t e : es) t.push_back({ev(e), coef});
    return t;
  };
  auto link = [&](VarId unit, const std::vector<std::size_t>& es, Family if_edge,
                  Family needs_edge) {
    for (std::size_t e : es) m.AddRow({{unit, 1.0}, {ev(e), -1.0}}, Sense::kGe, 0.0, if_edge);
    std::vector<Term> t = sum_edges(es);
    t.push_back({unit, -1.0});
    m.AddRow(std::move(t), Sense::kGe, 0.0, needs_edge);
  };

  // Linking of element variables and their incident edges.
  for (const auto& [ij, es] : sets.R) {
    link(*m.Unary(VarKind::kRow, ij.first, ij.second), es, Family::kRowIfCell,
         Family::kRowNeedsCell);
  }
  for (const auto& [ik, es] : sets.H) {
    link(*m.Unary(VarKind::kHeader, ik.first, ik.second), es, Family::kHeaderIfEdge,
         Family::kHeaderNeedsEdge);
  }
  for (const auto& [ik, es] : sets.C) {
    link(*m.Unary(VarKind::kColumn, ik.first, ik.second), es, Family::kColumnIfEdge,
         Family::kColumnNeedsEdge);
  }
  for (const auto& [i, es] : sets.T) {
    link(*m.Unary(VarKind::kTable, i), es, Family::kTableIfEdge, Family::kTableNeedsEdge);
  }
  for (const auto& [mm, es] : sets.O) {
    link(*m.Unary(VarKind::kOption, mm), es, Family::kOptionIfEdge, Family::kOptionNeedsEdge);
  }
  for (const auto& [l, es] : sets.Q) {
    link(*m.Unary(VarKind::kConstituent, l), es, Family::kConstituentIfEdge,
         Family::kConstituentNeedsEdge);
  }

  // Global cardinalities.
  std::vector<Term> options;
  for (std::size_t a = 0; a < q.options.size(); ++a) {
    if (auto v = m.Unary(VarKind::kOption, a)) options.push_back({*v, 1.0});
  }
  m.AddRow(options, Sense::kLe, 1.0, Family::kSingleOption);
  m.AddRow(options, Sense::kGe, 1.0, Family::kSingleOption);

  std::vector<Term> active_tables;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (auto v = m.Unary(VarKind::kTable, i)) active_tables.push_back({*v, 1.0});
  }
  m.AddRow(active_tables, Sense::kLe, c.max_tables_to_chain, Family::kMaxTables);

  for (std::size_t i = 0; i < tables.size(); ++i) {
    std::vector<Term> rows;
    for (std::size_t j = 0; j < tables[i].num_rows(); ++j) {
      if (auto v = m.Unary(VarKind::kRow, i, j)) rows.push_back({*v, 1.0});
    }
    if (!rows.empty()) m.AddRow(rows, Sense::kLe, c.max_rows_per_table, Family::kMaxRowsPerTable);
  }

  std::vector<Term> constituents;
  for (std::size_t l = 0; l < q.constituents.size(); ++l) {
    if (auto v = m.Unary(VarKind::kConstituent, l)) constituents.push_back({*v, 1.0});
  }
  m.AddRow(constituents, Sense::kGe, c.min_active_qcons, Family::kMinActiveQCons);

  // Cell and header activity.
  for (const auto& [ijk, es] : sets.E) {
    const VarId t = *m.Unary(VarKind::kCell, ijk[0], ijk[1], ijk[2]);
    for (std::size_t e : es) m.AddRow({{ev(e), 1.0}, {t, -1.0}}, Sense::kLe, 0.0, Family::kCellActive);
    std::vector<Term> s = sum_edges(es);
    s.push_back({t, -config.alignment.min_active_cell_aggr});
    m.AddRow(std::move(s), Sense::kGe, 0.0, Family::kCellActive);
  }
  for (const auto& [ik, es] : sets.H) {
    const VarId h = *m.Unary(VarKind::kHeader, ik.first, ik.second);
    std::vector<Term> s = sum_edges(es);
    s.push_back({h, -config.alignment.min_active_title_aggr});
    m.AddRow(std::move(s), Sense::kGe, 0.0, Family::kHeaderActive);
  }

  // Columns and tables.
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (std::size_t k = 0; k < tables[i].num_columns(); ++k) {
      const auto col = m.Unary(VarKind::kColumn, i, k);
      if (!col) continue;
      std::vector<Term> cells;
      for (std::size_t j = 0; j < tables[i].num_rows(); ++j) {
        if (auto v = m.Unary(VarKind::kCell, i, j, k)) cells.push_back({*v, 1.0});
      }
      cells.push_back({*col, -1.0});
      m.AddRow(std::move(cells), Sense::kGe, 0.0, Family::kColumnNeedsCell);
    }
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto table = m.Unary(VarKind::kTable, i);
    if (!table) continue;
    std::vector<Term> cols;
    for (std::size_t k = 0; k < tables[i].num_columns(); ++k) {
      if (auto col = m.Unary(VarKind::kColumn, i, k)) {
        m.AddRow({{*col, 1.0}, {*table, -1.0}}, Sense::kLe, 0.0, Family::kColumnImpliesTable);
        cols.push_back({*col, -1.0});
      }
    }
    cols.push_back({*table, 1.0});
    m.AddRow(std::move(cols), Sense::kLe, 0.0, Family::kTableNeedsColumn);
  }

  // Column-choice and table-choice variables.
  std::set<std::pair<std::size_t, std::size_t>> table_choice_keys;
  for (const auto& [ikm, es] : sets.M) {
    const VarKey key{VarKind::kColumnChoice, {ikm[0], ikm[1], ikm[2]}};
    m.Add(key, VarName(key, m.edges), 0.0);
    table_choice_keys.insert({ikm[0], ikm[2]});
  }
  for (const auto& [i, a] : table_choice_keys) {
    const VarKey key{VarKind::kTableChoice, {i, a}};
    m.Add(key, VarName(key, m.edges), 0.0);
  }
  for (const auto& [i, a] : table_choice_keys) {
    const VarId tc = *m.Find({VarKind::kTableChoice, {i, a}});
    std::vector<Term> col_choices;
    for (std::size_t k = 0; k < tables[i].num_columns(); ++k) {
      if (auto v = m.Find({VarKind::kColumnChoice, {i, k, a}})) col_choices.push_back({*v, 1.0});
    }
    m.AddRow(col_choices, Sense::kLe, c.max_active_column_choice_alignments,
             Family::kMaxColumnsPerChoice);

    std::vector<Term> non_choice;
    if (auto it = sets.N.find(i); it != sets.N.end()) non_choice = sum_edges(it->second, -1.0);
    non_choice.push_back({tc, 1.0});
    m.AddRow(std::move(non_choice), Sense::kLe, 0.0, Family::kTableChoiceNeedsNonChoice);

    m.AddRow(col_choices, Sense::kLe, c.max_active_choice_column_vars,
             Family::kMaxChoiceColumnVars);
    for (const Term& cc : col_choices) {
      m.AddRow({{cc.var, 1.0}, {tc, -1.0}}, Sense::kLe, 0.0,
               Family::kColumnChoiceImpliesTableChoice);
    }
    std::vector<Term> need = col_choices;
    for (Term& t : need) t.coef = -1.0;
    need.push_back({tc, 1.0});
    m.AddRow(std::move(need), Sense::kLe, 0.0, Family::kTableChoiceNeedsColumnChoice);
  }
  for (std::size_t a = 0; a < q.options.size(); ++a) {
    std::vector<Term> per_option;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (auto v = m.Find({VarKind::kTableChoice, {i, a}})) per_option.push_back({*v, 1.0});
    }
    if (!per_option.empty()) {
      m.AddRow(std::move(per_option), Sense::kLe, c.max_active_table_choice_alignments,
               Family::kMaxTablesPerChoice);
    }
  }
  for (const auto& [ikm, es] : sets.M) {
    const VarId cc = *m.Find({VarKind::kColumnChoice, {ikm[0], ikm[1], ikm[2]}});
    for (std::size_t e : es) {
      m.AddRow({{ev(e), 1.0}, {cc, -1.0}}, Sense::kLe, 0.0, Family::kChoiceImpliesColumnChoice);
    }
    std::vector<Term> s = sum_edges(es, -1.0);
    s.push_back({cc, 1.0});
    m.AddRow(std::move(s), Sense::kLe, 0.0, Family::kColumnChoiceNeedsEdge);
  }

  // "which" questions.
  if (config.options.which_terms && WhichPosition(q)) {
    const VarKey active{VarKind::kWhichActive, {}};
    const VarId wa = m.Add(active, VarName(active, m.edges), w.which_term_active);
    m.AddRow({{wa, 1.0}}, Sense::kGe, 1.0, Family::kWhichTermActive);

    const VarKey aligned{VarKind::kWhichAligned, {}};
    const VarId wl = m.Add(aligned, VarName(aligned, m.edges), w.which_term_aligned);
    const std::string span =
        WhichSpan(q, static_cast<std::size_t>(c.which_term_span));
    const auto scorer = MakeScorer(config.alignment.scorer);
    std::vector<Term> s;
    if (!span.empty()) {
      for (std::size_t e = 0; e < m.edges.size(); ++e) {
        const ScoredEdge& edge = m.edges[e];
        if (!IsOptionEdge(edge.kind)) continue;
        if (scorer->Score(ElementText(tables, edge.a), span) > c.min_alignment_which_term) {
          s.push_back({ev(e), 1.0});
        }
      }
    }
    s.push_back({wl, -1.0});
    m.AddRow(std::move(s), Sense::kGe, 0.0, Family::kWhichTermAligned);
  }

  for (const auto& [l, es] : sets.Q) {
    m.AddRow(sum_edges(es), Sense::kLe, c.max_alignments_per_qcons,
             Family::kMaxAlignmentsPerQCons);
  }

  // Pairs of constituents aligned to the same cell.
  for (const auto& [ijk, es] : sets.E) {
    std::vector<std::size_t> qedges;
    for (std::size_t e : es) {
      if (m.edges[e].kind == EdgeKind::kCellConstituent) qedges.push_back(e);
    }
    for (std::size_t x = 0; x < qedges.size(); ++x) {
      for (std::size_t y = x + 1; y < qedges.size(); ++y) {
        const std::size_t l1 = m.edges[qedges[x]].b.index;
        const std::size_t l2 = m.edges[qedges[y]].b.index;
        const std::size_t p1 = q.constituents[l1].position;
        const std::size_t p2 = q.constituents[l2].position;
        const double dist = p1 > p2 ? double(p1 - p2) : double(p2 - p1);
        if (dist > c.qcons_coalign_max_dist) {
          m.AddRow({{ev(qedges[x]), 1.0}, {ev(qedges[y]), 1.0}}, Sense::kLe, 1.0,
                   Family::kCoalignDistance);
        } else if (config.options.proximity_boost) {
          const std::size_t lo = std::min(l1, l2);
          const std::size_t hi = std::max(l1, l2);
          const VarKey key{VarKind::kProximity, {ijk[0], ijk[1], ijk[2], lo, hi}};
          const VarId b = m.Add(key, VarName(key, m.edges), 1.0 / double(hi - lo + 1));
          m.AddRow({{b, 1.0}, {ev(qedges[x]), -1.0}}, Sense::kLe, 0.0, Family::kProximityBoost);
          m.AddRow({{b, 1.0}, {ev(qedges[y]), -1.0}}, Sense::kLe, 0.0, Family::kProximityBoost);
        }
      }
    }
  }

  // Relation matches between declared column pairs.
  if (config.options.relation_matching) {
    std::map<std::pair<std::size_t, std::size_t>, std::vector<VarId>> by_column;
    for (const auto& cand : RelationCandidates(tables, q)) {
      const auto [i, ka, kb, l1, l2] = cand;
      by_column[{i, ka}];
      by_column[{i, kb}];
      const auto la = m.Unary(VarKind::kColumn, i, ka);
      const auto lb = m.Unary(VarKind::kColumn, i, kb);
      if (!la || !lb) continue;
      const VarKey key{VarKind::kRelation, cand};
      const VarId r = m.Add(key, VarName(key, m.edges), c.relation_match_coeff);
      m.AddRow({{r, 1.0}, {*la, -1.0}}, Sense::kLe, 0.0, Family::kRelationColumns);
      m.AddRow({{r, 1.0}, {*lb, -1.0}}, Sense::kLe, 0.0, Family::kRelationColumns);
      if (auto it = sets.C.find({i, ka}); it != sets.C.end()) {
        for (std::size_t e : it->second) {
          const ScoredEdge& edge = m.edges[e];
          if (edge.kind == EdgeKind::kCellConstituent && edge.b.index <= l1) {
            m.AddRow({{r, 1.0}, {ev(e), 1.0}}, Sense::kLe, 1.0, Family::kRelationPosition);
          }
        }
      }
      by_column[{i, ka}].push_back(r);
      by_column[{i, kb}].push_back(r);
    }
    for (const auto& [ik, rels] : by_column) {
      const auto col = m.Unary(VarKind::kColumn, ik.first, ik.second);
      if (!col) continue;
      std::vector<Term> t{{*col, 1.0}};
      for (VarId r : rels) t.push_back({r, -1.0});
      m.AddRow(std::move(t), Sense::kLe, 0.0, Family::kColumnNeedsRelation);
    }
  }

  // Rows.
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const Table& tab = tables[i];
    std::vector<std::size_t> rows;
    for (std::size_t j = 0; j < tab.num_rows(); ++j) {
      const auto r = m.Unary(VarKind::kRow, i, j);
      if (!r) continue;
      rows.push_back(j);
      std::vector<Term> cells;
      for (std::size_t k = 0; k < tab.num_columns(); ++k) {
        if (auto v = m.Unary(VarKind::kCell, i, j, k)) cells.push_back({*v, 1.0});
      }
      cells.push_back({*r, -c.min_active_cells_per_row});
      m.AddRow(std::move(cells), Sense::kGe, 0.0, Family::kMinCellsPerRow);

      std::vector<Term> nc;
      if (auto it = sets.L.find({i, j}); it != sets.L.end()) nc = sum_edges(it->second, -1.0);
      nc.push_back({*r, 1.0});
      m.AddRow(std::move(nc), Sense::kLe, 0.0, Family::kRowNonChoice);

      std::vector<Term> nq;
      if (auto it = sets.K.find({i, j}); it != sets.K.end()) nq = sum_edges(it->second, -1.0);
      nq.push_back({*r, 1.0});
      m.AddRow(std::move(nq), Sense::kLe, 0.0, Family::kRowNonQuestion);
    }
    for (std::size_t j : rows) {
      for (std::size_t j2 : rows) {
        if (j == j2) continue;
        for (std::size_t k = 0; k < tab.num_columns(); ++k) {
          const auto t = m.Unary(VarKind::kCell, i, j, k);
          if (!t) continue;
          std::vector<Term> s{{*m.Unary(VarKind::kRow, i, j), 1.0},
                              {*m.Unary(VarKind::kRow, i, j2), 1.0},
                              {*t, 1.0}};
          if (auto t2 = m.Unary(VarKind::kCell, i, j2, k)) s.push_back({*t2, -1.0});
          m.AddRow(std::move(s), Sense::kLe, 2.0, Family::kRowSignature);
        }
      }
    }
    std::vector<std::vector<std::vector<std::string>>> stems(tab.num_rows());
    for (std::size_t j : rows) {
      for (const std::string& cell : tab.rows[j]) stems[j].push_back(text::ContentStems(cell));
    }
    for (std::size_t x = 0; x < rows.size(); ++x) {
      for (std::size_t y = x + 1; y < rows.size(); ++y) {
        const std::size_t j = rows[x];
        const std::size_t j2 = rows[y];
        std::vector<Term> s;
        for (std::size_t k = 0; k < tab.num_columns(); ++k) {
          if (stems[j][k] == stems[j2][k]) continue;
          if (auto col = m.Unary(VarKind::kColumn, i, k)) s.push_back({*col, 1.0});
        }
        s.push_back({*m.Unary(VarKind::kRow, i, j), -1.0});
        s.push_back({*m.Unary(VarKind::kRow, i, j2), -1.0});
        m.AddRow(std::move(s), Sense::kGe, -1.0, Family::kRowsDiffer);
      }
    }
  }

  // Pairs of active tables must be chained by a cell-cell alignment.
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto ti = m.Unary(VarKind::kTable, i);
    if (!ti) continue;
    for (std::size_t i2 = i + 1; i2 < tables.size(); ++i2) {
      const auto ti2 = m.Unary(VarKind::kTable, i2);
      if (!ti2) continue;
      std::vector<Term> s;
      if (auto it = sets.inter.find({i, i2}); it != sets.inter.end()) s = sum_edges(it->second);
      s.push_back({*ti, -1.0});
      s.push_back({*ti2, -1.0});
      m.AddRow(std::move(s), Sense::kGe, -1.0, Family::kInterTableLink);
    }
  }

  m.base_variables = m.problem.num_variables();
  m.base_constraints = m.problem.num_constraints();
}

TableIlp BuildModel(const std::vector<Table>& tables, const QuestionInstance& q,
                    const ModelConfig& config) {
  config.Validate();
  const auto scorer = MakeScorer(config.alignment.scorer);
  TableIlp m = BuildVariables(tables, q, BuildCandidateEdges(tables, q, config.alignment, *scorer),
                              config.weights);
  const IncidenceSets sets = BuildIncidenceSets(tables, q, m.edges);
  BuildConstraints(m, tables, q, sets, config);
  return m;
}

void EssentialityProfile::Validate(std::size_t num_constituents) const {
  if (scores.size() != num_constituents) {
    ThrowInvalid("essentiality profile has " + std::to_string(scores.size()) +
                 " scores for " + std::to_string(num_constituents) + " constituents");
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) ThrowInvalid("essentiality scores must lie in [0, 1]");
  }
}

std::vector<std::size_t> Omega(const EssentialityProfile& profile, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) ThrowInvalid("threshold must lie in [0, 1]");
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < profile.scores.size(); ++l) {
    if (profile.scores[l] > xi) out.push_back(l);
  }
  return out;
}

void AddEssentialForcing(TableIlp& model, const EssentialityProfile& profile, double xi) {
  profile.Validate(model.num_constituents);
  for (std::size_t l : Omega(profile, xi)) {
    std::vector<Term> t;
    if (auto v = model.Unary(VarKind::kConstituent, l)) t.push_back({*v, 1.0});
    model.AddRow(std::move(t), Sense::kEq, 1.0, Family::kEssentialForcing);
  }
}

double DefaultBigM(const TableIlp& model) {
  double s = 0.0;
  const auto& vars = model.problem.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (!vars[j].cascade_indicator) s += std::abs(vars[j].weight);
  }
  return 1.0 + s;
}

void ValidateThresholds(const std::vector<double>& thresholds) {
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    if (!(thresholds[j] >= 0.0 && thresholds[j] <= 1.0)) {
      ThrowInvalid("cascade thresholds must lie in [0, 1]");
    }
    if (j > 0 && !(thresholds[j] > thresholds[j - 1])) {
      ThrowInvalid("cascade thresholds must be strictly increasing");
    }
  }
}

void BuildCascadeExtension(TableIlp& model, const EssentialityProfile& profile,
                           const std::vector<double>& thresholds, std::optional<double> big_m) {
  ValidateThresholds(thresholds);
  profile.Validate(model.num_constituents);
  double base = 0.0;
  for (const Variable& v : model.problem.variables()) {
    if (!v.cascade_indicator) base += std::abs(v.weight);
  }
  const double M = big_m.value_or(1.0 + base);
  if (!(M > base)) ThrowInvalid("big-M must exceed the sum of absolute objective weights");
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    const std::vector<std::size_t> omega = Omega(profile, thresholds[j]);
    const VarKey key{VarKind::kCascade, {j}};
    const VarId z = model.Add(key, VarName(key, model.edges), M, true);
    std::vector<Term> t{{z, static_cast<double>(omega.size())}};
    for (std::size_t l : omega) {
      if (auto v = model.Unary(VarKind::kConstituent, l)) t.push_back({*v, -1.0});
    }
    model.AddRow(std::move(t), Sense::kLe, 0.0, Family::kCascadeLevel);
  }
}

std::vector<int> BranchPriority(const IlpProblem& problem) {
  std::vector<int> priority(problem.num_variables(), 0);
  for (std::size_t v = 0; v < priority.size(); ++v) {
    const Variable& var = problem.variable(static_cast<VarId>(v));
    if (var.cascade_indicator) priority[v] = 3;
    else if (var.name.starts_with("x(a")) priority[v] = 2;
    else if (var.name.starts_with("x(T")) priority[v] = 1;
  }
  return priority;
}

}  // namespace tabilp
