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
// The table-alignment integer program.
//
// Element variables (tables, rows, columns, headers, cells, constituents,
// options) are linked to pairwise alignment variables, one per candidate edge,
// and the structural constraint families below shape the active part into a
// support graph. Every constraint carries the sentence of its family as tag.
//
// Variable order: edge variables in canonical edge order, then element
// variables grouped by kind (T, r, l, h, t, q, a), then the auxiliaries in
// creation order. Solutions are tie-broken lexicographically in this order.

#ifndef TABILP_MODEL_HPP
#define TABILP_MODEL_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tabilp/alignment.hpp"
#include "tabilp/ilp.hpp"
#include "tabilp/kb.hpp"

namespace tabilp {

struct VariableWeights {
  double table = 1.0;
  double row = -1.0;
  double column = 1.0;
  double header = 0.3;
  double cell = 0.0;
  double constituent = 0.3;
  double option = 0.0;
  // Cell pairs across tables get a constant weight; within a table the
  // alignment score is shifted. Other pairwise variables use the score.
  double cell_cell_inter = 1.0;
  double cell_cell_intra_shift = -0.1;
  double which_term_active = 1.5;
  double which_term_aligned = 1.5;

  bool operator==(const VariableWeights&) const = default;
};

struct ModelConstants {
  double max_tables_to_chain = 4;
  double qcons_coalign_max_dist = 4;
  double which_term_span = 2;
  double which_term_mul_boost = 1;  // stored, not used by the model
  double min_alignment_which_term = 0.6;
  double table_usage_penalty = 3;           // stored, not used by the model
  double row_usage_penalty = 1;             // stored, not used by the model
  double inter_table_alignment_penalty = 0.1;  // stored, not used by the model
  double max_alignments_per_qcons = 2;
  double max_alignments_per_cell = 2;  // stored, not used by the model
  double relation_match_coeff = 0.2;
  double empty_relation_match_coeff = 0.0;
  double no_relation_match_coeff = -5;
  double max_rows_per_table = 4;
  double min_active_qcons = 1;
  double max_active_column_choice_alignments = 1;
  double max_active_choice_column_vars = 2;
  double min_active_cells_per_row = 2;
  double max_active_table_choice_alignments = 1;

  bool operator==(const ModelConstants&) const = default;
};

struct ModelOptions {
  bool relation_matching = false;
  bool which_terms = true;
  bool proximity_boost = true;

  bool operator==(const ModelOptions&) const = default;
};

struct ModelConfig {
  AlignmentConfig alignment;
  VariableWeights weights;
  ModelConstants constants;
  ModelOptions options;

  void Validate() const;
};

// Constraint families. The label of each family is the tag carried by its
// constraints.
enum class Family : unsigned char {
  kRowIfCell,
  kRowNeedsCell,
  kHeaderIfEdge,
  kHeaderNeedsEdge,
  kColumnIfEdge,
  kColumnNeedsEdge,
  kTableIfEdge,
  kTableNeedsEdge,
  kOptionIfEdge,
  kOptionNeedsEdge,
  kConstituentIfEdge,
  kConstituentNeedsEdge,
  kSingleOption,
  kMaxTables,
  kMaxRowsPerTable,
  kMinActiveQCons,
  kCellActive,
  kHeaderActive,
  kColumnNeedsCell,
  kMaxColumnsPerChoice,
  kColumnImpliesTable,
  kTableNeedsColumn,
  kTableChoiceNeedsNonChoice,
  kMaxTablesPerChoice,
  kChoiceImpliesColumnChoice,
  kColumnChoiceNeedsEdge,
  kMaxChoiceColumnVars,
  kColumnChoiceImpliesTableChoice,
  kTableChoiceNeedsColumnChoice,
  kWhichTermActive,
  kWhichTermAligned,
  kMaxAlignmentsPerQCons,
  kCoalignDistance,
  kProximityBoost,
  kRelationColumns,
  kColumnNeedsRelation,
  kRelationPosition,
  kMinCellsPerRow,
  kRowNonChoice,
  kRowNonQuestion,
  kRowSignature,
  kRowsDiffer,
  kInterTableLink,
  // Not part of the structural model.
  kEssentialForcing,
  kCascadeLevel,
  kOptionDisabled,
  kOptionForced,
};

inline constexpr std::size_t kNumStructuralFamilies =
    static_cast<std::size_t>(Family::kInterTableLink) + 1;

std::string_view Label(Family f);
std::optional<Family> FamilyFromLabel(std::string_view label);

enum class VarKind : unsigned char {
  kEdge,
  kTable,
  kRow,
  kColumn,
  kHeader,
  kCell,
  kConstituent,
  kOption,
  kColumnChoice,   // y(l_ik, a_m): (i, k, m)
  kTableChoice,    // y(T_i, a_m): (i, m)
  kWhichActive,
  kWhichAligned,
  kProximity,      // (i, j, k, l, l')
  kRelation,       // (i, k, k', l, l')
  kCascade,        // (j)
};

// Kind plus up to five indices; unused indices are zero. For kEdge the first
// index is the position in TableIlp::edges.
struct VarKey {
  VarKind kind = VarKind::kEdge;
  std::array<std::size_t, 5> idx{};

  auto operator<=>(const VarKey&) const = default;
};

// Incidence sets, each holding indices into the edge list.
struct IncidenceSets {
  using Edges = std::vector<std::size_t>;
  std::map<std::pair<std::size_t, std::size_t>, Edges> H;   // (i, k)
  std::map<std::array<std::size_t, 3>, Edges> E;            // (i, j, k)
  std::map<std::pair<std::size_t, std::size_t>, Edges> C;   // (i, k)
  std::map<std::pair<std::size_t, std::size_t>, Edges> R;   // (i, j)
  std::map<std::pair<std::size_t, std::size_t>, Edges> L;   // (i, j)
  std::map<std::pair<std::size_t, std::size_t>, Edges> K;   // (i, j)
  std::map<std::size_t, Edges> T;                           // i
  std::map<std::size_t, Edges> N;                           // i
  std::map<std::size_t, Edges> Q;                           // l
  std::map<std::size_t, Edges> O;                           // m
  std::map<std::array<std::size_t, 3>, Edges> M;            // (i, k, m)
  // Inter-table cell pairs keyed by the ordered table pair.
  std::map<std::pair<std::size_t, std::size_t>, Edges> inter;
};

IncidenceSets BuildIncidenceSets(const std::vector<Table>& tables,
                                 const QuestionInstance& q,
                                 const std::vector<ScoredEdge>& edges);

struct TableIlp {
  IlpProblem problem;
  std::vector<ScoredEdge> edges;
  std::vector<VarKey> keys;         // per variable
  std::map<VarKey, VarId> index;    // inverse of keys
  std::size_t num_options = 0;
  std::size_t num_constituents = 0;
  std::size_t base_variables = 0;   // before forcing / cascade additions
  std::size_t base_constraints = 0;

  std::optional<VarId> Find(const VarKey& key) const;
  std::optional<VarId> EdgeVar(std::size_t edge) const { return Find({VarKind::kEdge, {edge}}); }
  std::optional<VarId> Unary(VarKind kind, std::size_t a = 0, std::size_t b = 0,
                             std::size_t c = 0) const {
    return Find({kind, {a, b, c}});
  }
  VarId Add(const VarKey& key, std::string name, double weight, bool cascade = false);
  std::size_t AddRow(std::vector<Term> terms, Sense sense, double rhs, Family family);
};

std::string VarName(const VarKey& key, const std::vector<ScoredEdge>& edges);

// Pairwise variables for every edge and element variables for every element
// incident to an edge. No constraints.
TableIlp BuildVariables(const std::vector<Table>& tables, const QuestionInstance& q,
                        std::vector<ScoredEdge> edges, const VariableWeights& weights);

// Appends every constraint family and the auxiliary variables they need.
void BuildConstraints(TableIlp& model, const std::vector<Table>& tables,
                      const QuestionInstance& q, const IncidenceSets& sets,
                      const ModelConfig& config);

// Edges, variables, incidence sets and constraints in one call.
TableIlp BuildModel(const std::vector<Table>& tables, const QuestionInstance& q,
                    const ModelConfig& config);

// Token position of the first "which" in the question, if any.
std::optional<std::size_t> WhichPosition(const QuestionInstance& q);
// Text of the WhichTermSpan constituents that follow "which".
std::string WhichSpan(const QuestionInstance& q, std::size_t span);

// Declared column relations (i, k, k', l, l') with l < l' whose trigger phrase
// occurs in the question strictly between constituents l and l'.
std::vector<std::array<std::size_t, 5>> RelationCandidates(const std::vector<Table>& tables,
                                                           const QuestionInstance& q);

struct EssentialityProfile {
  std::vector<double> scores;  // one per constituent, in [0, 1]
  std::string scorer;

  void Validate(std::size_t num_constituents) const;
};

// Constituents scoring strictly above xi.
std::vector<std::size_t> Omega(const EssentialityProfile& profile, double xi);

// Appends x(q_l) = 1 for every l in Omega(profile, xi). A forced constituent
// without a variable yields an unsatisfiable empty row.
void AddEssentialForcing(TableIlp& model, const EssentialityProfile& profile, double xi);

// Default big-M: one more than the sum of absolute base objective weights.
double DefaultBigM(const TableIlp& model);

// Adds z_j (weight M) with |omega_j| z_j <= sum over omega_j of x(q_l).
void BuildCascadeExtension(TableIlp& model, const EssentialityProfile& profile,
                           const std::vector<double>& thresholds,
                           std::optional<double> big_m = std::nullopt);

void ValidateThresholds(const std::vector<double>& thresholds);

// Branching priority per variable: cascade indicators, then options, then
// tables, then everything else. Deciding the few coarse choices first lets
// the search reach an integral support graph quickly. Works from variable
// names and flags, so programs read back from MPS get the same priorities.
std::vector<int> BranchPriority(const IlpProblem& problem);

}  // namespace tabilp

#endif  // TABILP_MODEL_HPP
