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

// Essential question terms: baseline scorers, the threshold cascade and
// ranking metrics.
//
// Dataset TSV, one term per line:
//   <question id>\t<term>\t<score>[\t<question text>]
// Score files (JSONL), one question per line:
//   {"id": "<question id>", "scores": {"<term>": <score>, ...}}

#ifndef TABILP_ESSENTIAL_HPP
#define TABILP_ESSENTIAL_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tabilp/kb.hpp"
#include "tabilp/model.hpp"
#include "tabilp/reason.hpp"

namespace tabilp {

inline constexpr double kEssentialLabelCut = 0.5;

struct EtRecord {
  std::string question_id;
  std::string term;
  std::string question;  // may be empty
  double score = 0.0;

  bool label() const { return score >= kEssentialLabelCut; }
  bool operator==(const EtRecord&) const = default;
};

struct EtDataset {
  std::vector<EtRecord> records;
};

EtDataset ParseEtDataset(std::string_view content);
EtDataset LoadEtDataset(const std::filesystem::path& path);
std::string SerializeEtDataset(const EtDataset& data);

// Scores a question term in the context of its question. Implementations are
// immutable after construction and safe to share across threads.
class TermScorer {
 public:
  virtual ~TermScorer() = default;
  virtual std::string name() const = 0;
  // In [0, 1].
  virtual double Score(std::string_view term, const QuestionInstance& q) const = 0;
};

// One score per constituent of `q`.
EssentialityProfile ScoreQuestion(const TermScorer& scorer, const QuestionInstance& q);

enum class PropMode { kSurface, kLemma };

// Proportion of training occurrences labelled essential. Unseen terms get a
// uniform draw in [0, 1] from a generator seeded by (seed, term), so a term
// scores the same regardless of call order.
class PropScorer final : public TermScorer {
 public:
  PropScorer(const EtDataset& train, PropMode mode, std::uint64_t seed);

  std::string name() const override;
  double Score(std::string_view term, const QuestionInstance& q) const override;
  double Score(std::string_view term) const;

  std::string Key(std::string_view term) const;
  std::optional<double> Proportion(std::string_view term) const;

 private:
  PropMode mode_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> counts_;
};

enum class PmiReduce { kMax, kSum };

// Co-occurrence statistics over unigrams, bigrams, trigrams and skip-bigrams
// of a sentence-per-line corpus. Two n-gram occurrences co-occur when they sit
// in one sentence without overlapping and the gap between their nearest
// tokens is 1..window. Probabilities are normalized per n-gram kind (and per
// kind pair for co-occurrence), so the unigram case reduces to plain token
// and token-pair frequencies.
class NgramStats {
 public:
  NgramStats(const Corpus& corpus, std::size_t skip);

  std::size_t window() const { return window_; }
  std::size_t skip() const { return skip_; }

  // `kind` 0..3: unigram, bigram, trigram, skip-bigram. Tokens must match
  // the kind's arity.
  struct Gram {
    int kind = 0;
    std::vector<std::string> tokens;
  };

  std::size_t Occurrences(const Gram& g) const;
  std::size_t CoOccurrences(const Gram& x, const Gram& y) const;
  // log p(x,y) / (p(x) p(y)); 0 when either is absent or they never co-occur.
  double Pmi(const Gram& x, const Gram& y) const;

  // All n-grams of a token sequence, de-duplicated, skipping those made of
  // stopwords only.
  std::vector<Gram> Grams(const std::vector<std::string>& tokens) const;

 private:
  struct Position {
    std::uint32_t sentence;
    std::uint32_t start;
  };
  std::size_t Extent(int kind) const;
  std::vector<Position> Find(const Gram& g) const;

  std::vector<std::vector<std::string>> sentences_;
  std::size_t window_;
  std::size_t skip_;
  std::unordered_map<std::string, std::vector<Position>> index_;
  std::size_t positions_[4] = {0, 0, 0, 0};
  std::size_t pairs_[4][4] = {};
};

// Importance of a term by max or sum of its PMI with every n-gram of every
// answer option. The raw value is mapped to [0, 1) by r / (1 + r) after
// clamping at 0.
class PmiScorer final : public TermScorer {
 public:
  PmiScorer(std::shared_ptr<const NgramStats> stats, PmiReduce reduce);

  std::string name() const override;
  double Score(std::string_view term, const QuestionInstance& q) const override;
  double Raw(std::string_view term, const QuestionInstance& q) const;

 private:
  std::shared_ptr<const NgramStats> stats_;
  PmiReduce reduce_;
};

// Scores produced elsewhere, keyed by question id and term.
class FileScorer final : public TermScorer {
 public:
  explicit FileScorer(std::map<std::string, std::map<std::string, double>> scores);

  std::string name() const override { return "file"; }
  double Score(std::string_view term, const QuestionInstance& q) const override;

 private:
  std::map<std::string, std::map<std::string, double>> scores_;
};

std::map<std::string, std::map<std::string, double>> ParseScoreFile(std::string_view content);
std::map<std::string, std::map<std::string, double>> LoadScoreFile(
    const std::filesystem::path& path);
// Groups records by question id in first-appearance order.
std::string SerializeScoreFile(const std::vector<EtRecord>& scored);

// Builds a scorer from its name: prop-surf, prop-lem, max-pmi, sum-pmi.
// Inputs the scorer does not need may be null.
std::shared_ptr<const TermScorer> MakeTermScorer(std::string_view name, const EtDataset* train,
                                                 const Corpus* corpus, std::size_t skip,
                                                 std::uint64_t seed);

// Sequential cascade: answers with essential forcing at each threshold in
// turn and stops at the first stage that does not abstain; the unforced
// model is the last resort. `cascade_stage` is the index of the answering
// threshold, or thresholds.size() for the unforced model.
AnswerResult RunCascade(const std::vector<Table>& tables, const QuestionInstance& q,
                        const EssentialityProfile& profile,
                        const std::vector<double>& thresholds, const ReasonConfig& config);

// The same cascade as one program with big-M stage indicators.
AnswerResult AnswerCascadeExtension(const std::vector<Table>& tables,
                                    const QuestionInstance& q,
                                    const EssentialityProfile& profile,
                                    const std::vector<double>& thresholds,
                                    const ReasonConfig& config,
                                    std::optional<double> big_m = std::nullopt);

struct ScoredTerm {
  std::string question_id;
  double score = 0.0;
  bool label = false;
};

struct EtMetrics {
  double auc = 0.0;  // area under the precision-recall curve
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double map = 0.0;
  std::size_t terms = 0;
  std::size_t questions = 0;  // questions with at least one positive
};

// Ranks by descending score; equal scores keep input order. Precision at
// each positive's rank, averaged. 0 without positives.
double AveragePrecision(const std::vector<ScoredTerm>& ranked);

// Trapezoid area under the precision-recall curve traced by lowering the
// threshold through every distinct score, starting from (recall 0,
// precision 1). 0 without positives.
double PrAuc(const std::vector<ScoredTerm>& items);

// A term is predicted essential when its score is strictly above
// `threshold`, matching Omega. MAP averages over questions that have at
// least one positive.
EtMetrics ComputeEtMetrics(const std::vector<ScoredTerm>& items, double threshold);

std::string MetricsToJson(const EtMetrics& m);

}  // namespace tabilp

#endif  // TABILP_ESSENTIAL_HPP
