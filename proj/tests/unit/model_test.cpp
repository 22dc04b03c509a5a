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
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "synthetic.hpp"
#include "tabilp/error.hpp"
#include "tabilp/model.hpp"
#include "tabilp/mps.hpp"
#include "tabilp/solver.hpp"

namespace tabilp {
namespace {

Table MakeTable(std::string id, std::string title, std::vector<std::string> headers,
                std::vector<std::vector<std::string>> rows) {
  Table t;
  t.id = std::move(id);
  t.title = std::move(title);
  t.headers = std::move(headers);
  t.rows = std::move(rows);
  return t;
}

QuestionInstance Question(const std::string& text, std::vector<std::string> options) {
  QuestionInstance q;
  q.id = "q";
  q.text = text;
  q.constituents = ChunkQuestion(text);
  q.options = std::move(options);
  return q;
}

std::map<std::string, double> NamedWeights(const IlpProblem& p) {
  std::map<std::string, double> out;
  for (const Variable& v : p.variables()) out[v.name] = v.weight;
  return out;
}

std::map<std::string, int> TagCounts(const IlpProblem& p) {
  std::map<std::string, int> out;
  for (const Constraint& c : p.constraints()) ++out[c.tag];
  return out;
}

TEST_CASE("no edges, no variables") {
  const std::vector<Table> tables = {MakeTable("t", "t", {"a"}, {{"x"}})};
  const QuestionInstance q = Question("dog", {"cat", "cow"});
  const TableIlp m = BuildVariables(tables, q, {}, VariableWeights{});
  CHECK(m.problem.num_variables() == 0);
  const IncidenceSets s = BuildIncidenceSets(tables, q, {});
  CHECK(s.H.empty());
  CHECK(s.E.empty());
  CHECK(s.C.empty());
  CHECK(s.R.empty());
  CHECK(s.L.empty());
  CHECK(s.K.empty());
  CHECK(s.T.empty());
  CHECK(s.N.empty());
  CHECK(s.Q.empty());
  CHECK(s.O.empty());
  CHECK(s.M.empty());
}

TEST_CASE("one cell-option edge instantiates its elements") {
  const std::vector<Table> tables = {MakeTable("t", "t", {"a"}, {{"x"}})};
  const QuestionInstance q = Question("dog", {"x", "cow"});
  const ScoredEdge e{ElementRef::Cell(0, 0, 0), ElementRef::Option(0), EdgeKind::kCellOption, 0.8};
  const TableIlp m = BuildVariables(tables, q, {e}, VariableWeights{});
  const std::map<std::string, double> expect = {
      {"y(t0_0_0,a0)", 0.8}, {"x(T0)", 1.0}, {"x(r0_0)", -1.0},
      {"x(l0_0)", 1.0},      {"x(t0_0_0)", 0.0}, {"x(a0)", 0.0}};
  CHECK(NamedWeights(m.problem) == expect);
}

TEST_CASE("intra-table cell pair is shifted by -0.1") {
  const std::vector<Table> tables = {MakeTable("t", "t", {"a"}, {{"x"}, {"y"}})};
  const QuestionInstance q = Question("dog", {"x", "cow"});
  const ScoredEdge e{ElementRef::Cell(0, 0, 0), ElementRef::Cell(0, 1, 0), EdgeKind::kCellCellIntra,
                     0.7};
  const TableIlp m = BuildVariables(tables, q, {e}, VariableWeights{});
  CHECK(m.problem.variable(*m.EdgeVar(0)).weight == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("incidence sets follow their definitions") {
  const std::vector<Table> tables = {MakeTable("t", "t", {"a", "b"}, {{"x", "y"}})};
  const QuestionInstance q = Question("dog", {"x", "cow"});
  SUBCASE("cell-constituent") {
    const ScoredEdge e{ElementRef::Cell(0, 0, 1), ElementRef::Constituent(0),
                       EdgeKind::kCellConstituent, 0.5};
    const IncidenceSets s = BuildIncidenceSets(tables, q, {e});
    CHECK(s.R.at({0, 0}) == std::vector<std::size_t>{0});
    CHECK(s.K.count({0, 0}) == 0);  // K holds non-question alignments only
    CHECK(s.L.at({0, 0}) == std::vector<std::size_t>{0});
    CHECK(s.E.at({0, 0, 1}) == std::vector<std::size_t>{0});
    CHECK(s.C.at({0, 1}) == std::vector<std::size_t>{0});
    CHECK(s.Q.at(0) == std::vector<std::size_t>{0});
    CHECK(s.O.empty());
  }
  SUBCASE("header-option") {
    const ScoredEdge e{ElementRef::Header(0, 1), ElementRef::Option(1), EdgeKind::kHeaderOption,
                       0.5};
    const IncidenceSets s = BuildIncidenceSets(tables, q, {e});
    CHECK(s.H.at({0, 1}) == std::vector<std::size_t>{0});
    CHECK(s.O.at(1) == std::vector<std::size_t>{0});
    CHECK(s.M.at({0, 1, 1}) == std::vector<std::size_t>{0});
    CHECK(s.N.empty());  // option alignments are not non-choice
    CHECK(s.R.empty());
  }
}

TEST_CASE("option cardinality rows") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = testing::MakeInstance(seed);
    const TableIlp m = BuildModel(inst.tables, inst.question, ModelConfig{});
    int le = 0, ge = 0;
    for (const Constraint& c : m.problem.constraints()) {
      if (c.tag != Label(Family::kSingleOption)) continue;
      CHECK(c.rhs == 1.0);
      for (const Term& t : c.terms) CHECK(m.problem.variable(t.var).name.starts_with("x(a"));
      if (c.sense == Sense::kLe) ++le;
      if (c.sense == Sense::kGe) ++ge;
    }
    CHECK(le == 1);
    CHECK(ge == 1);
  }
}

TEST_CASE("six tables are capped at MaxTablesToChain") {
  std::vector<Table> tables;
  for (int i = 0; i < 6; ++i) {
    tables.push_back(MakeTable("t" + std::to_string(i), "t", {"name"}, {{"dog"}}));
  }
  const QuestionInstance q = Question("dog", {"cat", "cow"});
  const TableIlp m = BuildModel(tables, q, ModelConfig{});
  int found = 0;
  for (const Constraint& c : m.problem.constraints()) {
    if (c.tag != Label(Family::kMaxTables)) continue;
    ++found;
    CHECK(c.sense == Sense::kLe);
    CHECK(c.rhs == 4.0);
    CHECK(c.terms.size() == 6);
  }
  CHECK(found == 1);
}

TEST_CASE("tiny fully connected instance matches a hand enumeration") {
  // One table, 2 rows x 2 columns, constituents "alpha beta" (adjacent), two
  // options; every cell aligned to every constituent and every option.
  const std::vector<Table> tables = {
      MakeTable("t", "t", {"h0", "h1"}, {{"c00", "c01"}, {"c10", "c11"}})};
  const QuestionInstance q = Question("alpha beta", {"o0", "o1"});
  std::vector<ScoredEdge> edges;
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < 2; ++k) {
      for (std::size_t l = 0; l < 2; ++l) {
        edges.push_back({ElementRef::Cell(0, j, k), ElementRef::Constituent(l),
                         EdgeKind::kCellConstituent, 0.5});
      }
      for (std::size_t a = 0; a < 2; ++a) {
        edges.push_back(
            {ElementRef::Cell(0, j, k), ElementRef::Option(a), EdgeKind::kCellOption, 0.5});
      }
    }
  }
  TableIlp m = BuildVariables(tables, q, edges, VariableWeights{});
  BuildConstraints(m, tables, q, BuildIncidenceSets(tables, q, m.edges), ModelConfig{});

  // Each row and column touches 8 edges, the table 16, each option and
  // constituent 4. Four (column, option) pairs with two edges each make four
  // column-choice and two table-choice variables. Each cell holds two
  // constituents one token apart, giving one proximity boost per cell.
  const std::map<Family, int> expect = {
      {Family::kRowIfCell, 16},
      {Family::kRowNeedsCell, 2},
      {Family::kColumnIfEdge, 16},
      {Family::kColumnNeedsEdge, 2},
      {Family::kTableIfEdge, 16},
      {Family::kTableNeedsEdge, 1},
      {Family::kOptionIfEdge, 8},
      {Family::kOptionNeedsEdge, 2},
      {Family::kConstituentIfEdge, 8},
      {Family::kConstituentNeedsEdge, 2},
      {Family::kSingleOption, 2},
      {Family::kMaxTables, 1},
      {Family::kMaxRowsPerTable, 1},
      {Family::kMinActiveQCons, 1},
      {Family::kCellActive, 4 * (4 + 1)},
      {Family::kColumnNeedsCell, 2},
      {Family::kColumnImpliesTable, 2},
      {Family::kTableNeedsColumn, 1},
      {Family::kMaxColumnsPerChoice, 2},
      {Family::kTableChoiceNeedsNonChoice, 2},
      {Family::kMaxTablesPerChoice, 2},
      {Family::kChoiceImpliesColumnChoice, 8},
      {Family::kColumnChoiceNeedsEdge, 4},
      {Family::kMaxChoiceColumnVars, 2},
      {Family::kColumnChoiceImpliesTableChoice, 4},
      {Family::kTableChoiceNeedsColumnChoice, 2},
      {Family::kMaxAlignmentsPerQCons, 2},
      {Family::kProximityBoost, 2 * 4},
      {Family::kMinCellsPerRow, 2},
      {Family::kRowNonChoice, 2},
      {Family::kRowNonQuestion, 2},
      {Family::kRowSignature, 2 * 2},
      {Family::kRowsDiffer, 1},
  };
  std::map<std::string, int> want;
  int total = 0;
  for (const auto& [f, n] : expect) {
    want[std::string(Label(f))] += n;
    total += n;
  }
  CHECK(TagCounts(m.problem) == want);
  CHECK(m.problem.num_constraints() == static_cast<std::size_t>(total));
  // 16 edges, 1 table, 2 rows, 2 columns, 4 cells, 2 constituents, 2 options,
  // 4 column choices, 2 table choices, 4 proximity boosts.
  CHECK(m.problem.num_variables() == 16 + 1 + 2 + 2 + 4 + 2 + 2 + 4 + 2 + 4);
}

TEST_CASE("every structural tag appears on a rich instance") {
  Table coverings = MakeTable("cov", "animal coverings", {"animal", "covering"},
                              {{"bird", "feathers"}, {"sea animal", "scales"}, {"bear", "thick fur"}});
  coverings.relations.push_back({0, 1, {"has"}});
  const Table homes = MakeTable("home", "animal homes", {"animal", "home"},
                                {{"bird", "nest"}, {"bear", "warm nest"}});
  const std::vector<Table> tables = {coverings, homes};
  QuestionInstance q;
  q.id = "rich";
  // "thick" and "fur" sit far apart but share a cell; "warm" and "nest" sit
  // close together and share another. "has" triggers the relation.
  q.text = "which animal has thick feathers and often builds a warm safe nest of fur";
  q.constituents = ChunkQuestion(q.text);
  q.options = {"bird", "fish", "animal covering"};
  ModelConfig cfg;
  cfg.options.relation_matching = true;
  const TableIlp m = BuildModel(tables, q, cfg);
  std::set<std::string> tags;
  for (const Constraint& c : m.problem.constraints()) tags.insert(c.tag);
  for (std::size_t f = 0; f < kNumStructuralFamilies; ++f) {
    const std::string label(Label(static_cast<Family>(f)));
    CAPTURE(label);
    CHECK(tags.count(label) == 1);
  }
  for (const std::string& t : tags) CHECK(FamilyFromLabel(t).has_value());
}

// Objective recomputed from the variable keys and the weight table alone.
double RecomputedObjective(const TableIlp& m, const std::vector<std::uint8_t>& x,
                           const VariableWeights& w, const ModelConstants& c) {
  double sum = 0.0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (!x[v]) continue;
    const VarKey& k = m.keys[v];
    switch (k.kind) {
      case VarKind::kEdge: {
        const ScoredEdge& e = m.edges[k.idx[0]];
        if (e.kind == EdgeKind::kCellCellInter) sum += w.cell_cell_inter;
        else if (e.kind == EdgeKind::kCellCellIntra) sum += e.weight - 0.1;
        else sum += e.weight;
        break;
      }
      case VarKind::kTable: sum += w.table; break;
      case VarKind::kRow: sum += w.row; break;
      case VarKind::kColumn: sum += w.column; break;
      case VarKind::kHeader: sum += w.header; break;
      case VarKind::kCell: sum += w.cell; break;
      case VarKind::kConstituent: sum += w.constituent; break;
      case VarKind::kOption: sum += w.option; break;
      case VarKind::kColumnChoice:
      case VarKind::kTableChoice: break;
      case VarKind::kWhichActive: sum += w.which_term_active; break;
      case VarKind::kWhichAligned: sum += w.which_term_aligned; break;
      case VarKind::kProximity: sum += 1.0 / double(k.idx[4] - k.idx[3] + 1); break;
      case VarKind::kRelation: sum += c.relation_match_coeff; break;
      case VarKind::kCascade: break;
    }
  }
  return sum;
}

TEST_CASE("objective equals the weight table sum for any assignment") {
  std::mt19937_64 rng(5);
  ModelConfig cfg;
  cfg.options.relation_matching = true;
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto inst = testing::MakeInstance(seed);
    const TableIlp m = BuildModel(inst.tables, inst.question, cfg);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::uint8_t> x(m.problem.num_variables());
      for (auto& b : x) b = rng() % 2;
      CHECK(m.problem.Objective(x) ==
            doctest::Approx(RecomputedObjective(m, x, cfg.weights, cfg.constants)).epsilon(1e-12));
    }
  }
}

TEST_CASE("essential forcing") {
  const std::vector<Table> tables = {MakeTable("t", "t", {"a"}, {{"dog"}, {"cat"}})};
  const QuestionInstance q = Question("dog cat", {"dog", "cat"});
  const TableIlp base = BuildModel(tables, q, ModelConfig{});
  const auto forcing_rows = [](const TableIlp& m) {
    std::vector<Constraint> out;
    for (const Constraint& c : m.problem.constraints()) {
      if (c.tag == Label(Family::kEssentialForcing)) out.push_back(c);
    }
    return out;
  };
  EssentialityProfile p{{0.9, 0.2}, "test"};
  {
    TableIlp m = base;
    AddEssentialForcing(m, p, 0.36);
    const auto rows = forcing_rows(m);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sense == Sense::kEq);
    CHECK(rows[0].rhs == 1.0);
    REQUIRE(rows[0].terms.size() == 1);
    CHECK(m.problem.variable(rows[0].terms[0].var).name == "x(q0)");
  }
  {
    TableIlp m = base;
    AddEssentialForcing(m, p, 1.0);
    CHECK(forcing_rows(m).empty());
  }
  {
    TableIlp m = base;
    AddEssentialForcing(m, EssentialityProfile{{0.4, 0.0}, "t"}, 0.0);
    CHECK(forcing_rows(m).size() == 1);  // score 0 is not above 0
  }
  TableIlp m = base;
  CHECK_THROWS_AS(AddEssentialForcing(m, p, 1.5), Error);
  CHECK_THROWS_AS(AddEssentialForcing(m, p, -0.1), Error);
  CHECK_THROWS_AS(AddEssentialForcing(m, EssentialityProfile{{0.5}, "t"}, 0.3), Error);
}

TEST_CASE("omega is strict and antitone") {
  CHECK(Omega({{0.36, 0.36}, ""}, 0.36).empty());
  CHECK(Omega({{0.9, 0.2}, ""}, 0.36) == std::vector<std::size_t>{0});
  CHECK(Omega({{0.0, 0.5, 1.0}, ""}, 0.0) == std::vector<std::size_t>{1, 2});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    EssentialityProfile p;
    for (int l = 0; l < 8; ++l) p.scores.push_back(std::round(u(rng) * 10) / 10);
    double a = std::round(u(rng) * 10) / 10;
    double b = std::round(u(rng) * 10) / 10;
    if (a > b) std::swap(a, b);
    const auto wide = Omega(p, a);
    for (std::size_t l : Omega(p, b)) {
      CHECK(std::find(wide.begin(), wide.end(), l) != wide.end());
    }
  }
}

TEST_CASE("cascade extension") {
  const auto inst = testing::MakeInstance(4);
  const TableIlp base = BuildModel(inst.tables, inst.question, ModelConfig{});
  EssentialityProfile p;
  for (std::size_t l = 0; l < base.num_constituents; ++l) p.scores.push_back(l % 2 ? 0.9 : 0.5);

  TableIlp m = base;
  BuildCascadeExtension(m, p, {0.4, 0.6, 0.8, 1.0});
  int z = 0;
  const double M = DefaultBigM(base);
  for (const Variable& v : m.problem.variables()) {
    if (!v.cascade_indicator) continue;
    ++z;
    CHECK(v.weight == M);
  }
  CHECK(z == 4);
  CHECK(M == doctest::Approx(1.0 + base.problem.SumAbsWeights()));

  // omega(1.0) is empty: its row has no terms and z_3 is free, so the
  // optimum sets it.
  const Solution s = Solve(m.problem, {});
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.assignment[*m.Find({VarKind::kCascade, {3}})] == 1);

  TableIlp bad = base;
  CHECK_THROWS_AS(BuildCascadeExtension(bad, p, {0.6, 0.4}), Error);
  CHECK_THROWS_AS(BuildCascadeExtension(bad, p, {0.4, 0.4}), Error);
  CHECK_THROWS_AS(BuildCascadeExtension(bad, p, {0.4}, 1.0), Error);
}

TEST_CASE("extensions compose on top of a byte-identical base") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = testing::MakeInstance(seed);
    const TableIlp base = BuildModel(inst.tables, inst.question, ModelConfig{});
    TableIlp ext = base;
    EssentialityProfile p;
    for (std::size_t l = 0; l < base.num_constituents; ++l) p.scores.push_back(0.1 * double(l % 10));
    AddEssentialForcing(ext, p, 0.36);
    BuildCascadeExtension(ext, p, {0.4, 0.6, 0.8, 1.0});

    IlpProblem stripped;
    for (std::size_t v = 0; v < base.base_variables; ++v) {
      const Variable& var = ext.problem.variable(static_cast<VarId>(v));
      stripped.AddVariable(var.name, var.weight, var.cascade_indicator);
    }
    for (std::size_t r = 0; r < base.base_constraints; ++r) {
      const Constraint& c = ext.problem.constraints()[r];
      stripped.AddConstraint(c.terms, c.sense, c.rhs, c.tag);
    }
    CHECK(stripped == base.problem);
    CHECK(ToMps(stripped) == ToMps(base.problem));
    CHECK(ToMps(BuildModel(inst.tables, inst.question, ModelConfig{}).problem) ==
          ToMps(base.problem));
  }
}

TEST_CASE("default weights and constants") {
  const VariableWeights w;
  CHECK(w.table == 1.0);
  CHECK(w.row == -1.0);
  CHECK(w.column == 1.0);
  CHECK(w.header == 0.3);
  CHECK(w.cell == 0.0);
  CHECK(w.constituent == 0.3);
  CHECK(w.cell_cell_inter == 1.0);
  CHECK(w.cell_cell_intra_shift == -0.1);
  CHECK(w.which_term_active == 1.5);
  CHECK(w.which_term_aligned == 1.5);
  const ModelConstants c;
  CHECK(c.max_tables_to_chain == 4);
  CHECK(c.qcons_coalign_max_dist == 4);
  CHECK(c.which_term_span == 2);
  CHECK(c.which_term_mul_boost == 1);
  CHECK(c.min_alignment_which_term == 0.6);
  CHECK(c.table_usage_penalty == 3);
  CHECK(c.row_usage_penalty == 1);
  CHECK(c.inter_table_alignment_penalty == 0.1);
  CHECK(c.max_alignments_per_qcons == 2);
  CHECK(c.max_alignments_per_cell == 2);
  CHECK(c.relation_match_coeff == 0.2);
  CHECK(c.empty_relation_match_coeff == 0.0);
  CHECK(c.no_relation_match_coeff == -5);
  CHECK(c.max_rows_per_table == 4);
  CHECK(c.min_active_qcons == 1);
  CHECK(c.max_active_column_choice_alignments == 1);
  CHECK(c.max_active_choice_column_vars == 2);
  CHECK(c.min_active_cells_per_row == 2);
  CHECK(c.max_active_table_choice_alignments == 1);
}

}  // namespace
}  // namespace tabilp
