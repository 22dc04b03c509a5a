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

// Solver combination: a sentence-retrieval baseline, per-option features
// over several solvers' scores, and a logistic-regression combiner.
//
// Scorecard JSONL, one question per line:
//   {"id": "q1", "gold": 0, "options": 4,
//    "solvers": {"ir": [1.2, 0.0, null, 3.1], "tableilp": [...]},
//    "tableilp_support": [[11 numbers] or null, ...]}
// A null score is missing; it reads as 0 and sets the missing flag.

#ifndef TABILP_ENSEMBLE_HPP
#define TABILP_ENSEMBLE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tabilp/kb.hpp"
#include "tabilp/support.hpp"

namespace tabilp {

struct IrConfig {
  double k1 = 1.2;
  double b = 0.75;

  bool operator==(const IrConfig&) const = default;
};

// BM25 over corpus sentences, matching content stems. A sentence qualifies
// only if it shares a stem with the question terms and with the option.
class IrIndex {
 public:
  IrIndex(const Corpus& corpus, const IrConfig& config = {});

  // Best qualifying sentence score; 0 when none qualifies. With `terms`,
  // only those question constituents form the question side.
  double Score(const QuestionInstance& q, std::size_t option,
               const std::vector<std::size_t>* terms = nullptr) const;
  // Index of the best qualifying sentence.
  std::optional<std::size_t> Best(const QuestionInstance& q, std::size_t option,
                                  const std::vector<std::size_t>* terms = nullptr) const;

  double Idf(std::string_view stem) const;

 private:
  std::pair<std::optional<std::size_t>, double> Search(
      const QuestionInstance& q, std::size_t option, const std::vector<std::size_t>* terms) const;

  IrConfig config_;
  std::vector<std::vector<std::string>> docs_;  // sorted unique stems
  std::vector<std::unordered_map<std::string, std::size_t>> tf_;
  std::vector<std::size_t> length_;
  double avg_length_ = 0.0;
  std::unordered_map<std::string, std::vector<std::uint32_t>> postings_;
};

inline constexpr std::size_t kTableIlpFeatureCount = 11;
using TableIlpFeatureVector = std::array<double, kTableIlpFeatureCount>;

const std::array<std::string_view, kTableIlpFeatureCount>& TableIlpFeatureNames();

// Averages and minima run over the active edges of the graph; empty sets
// give 0.
TableIlpFeatureVector TableIlpFeatures(const SupportGraph& graph, std::size_t num_constituents,
                                       std::size_t num_variables, std::size_t num_constraints);

struct SolverScores {
  std::string solver;
  std::vector<double> scores;  // one per option
  std::vector<bool> missing;   // same length

  bool operator==(const SolverScores&) const = default;
};

struct SolverScorecard {
  std::string question_id;
  std::optional<std::size_t> gold;
  std::size_t num_options = 0;
  std::vector<SolverScores> solvers;
  // Empty, or one entry per option.
  std::vector<std::optional<TableIlpFeatureVector>> tableilp_support;

  void Validate() const;
  bool operator==(const SolverScorecard&) const = default;
};

std::string ScorecardToJson(const SolverScorecard& card);
SolverScorecard ScorecardFromJson(std::string_view line);
std::vector<SolverScorecard> ParseScorecards(std::string_view content);
std::vector<SolverScorecard> LoadScorecards(const std::filesystem::path& path);

struct OptionFeatures {
  double score = 0.0;
  double normalized = 0.0;  // s_i / sum s_j; 1/n when the sum is 0
  double softmax = 0.0;
  double best = 0.0;        // 1 for every option attaining the maximum
};

std::vector<OptionFeatures> SolverIndependentFeatures(const std::vector<double>& scores);

// Per solver (card order): score, normalized, softmax, best; then the
// TableILP block when the card carries one.
std::vector<std::string> FeatureNames(const SolverScorecard& card);
std::vector<double> ExtractFeatures(const SolverScorecard& card, std::size_t option);

struct CombinerConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 2000;
  double l2 = 1e-3;

  void Validate() const;
  bool operator==(const CombinerConfig&) const = default;
};

// Logistic model over standardized features: p = 1 / (1 + exp(-(w.z + b)))
// with z = (x - mean) / scale.
struct CombinerModel {
  std::vector<std::string> features;
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> mean;
  std::vector<double> scale;
  CombinerConfig config;

  double Linear(const std::vector<double>& x) const;
  double Probability(const std::vector<double>& x) const;
  void Validate() const;
};

// Full-batch gradient descent on mean log-loss plus l2/2 |w|^2 (bias not
// penalized), from all-zero weights. `loss_trace`, if given, receives the
// objective before the first epoch and after each one.
CombinerModel TrainCombiner(const std::vector<std::vector<double>>& x,
                            const std::vector<int>& y, std::vector<std::string> features,
                            const CombinerConfig& config,
                            std::vector<double>* loss_trace = nullptr);

// Examples from every card with a gold answer, one per option.
struct TrainingSet {
  std::vector<std::string> features;
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};
TrainingSet BuildTrainingSet(const std::vector<SolverScorecard>& cards);

struct Combination {
  std::size_t chosen = 0;  // argmax, lowest index on ties
  std::vector<double> probabilities;
  std::vector<double> linear;
};

Combination Combine(const CombinerModel& model, const std::vector<std::vector<double>>& options);
Combination Combine(const CombinerModel& model, const SolverScorecard& card);

std::string CombinerToJson(const CombinerModel& model);
CombinerModel CombinerFromJson(std::string_view content);

}  // namespace tabilp

#endif  // TABILP_ENSEMBLE_HPP
