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
#include <string>
#include <vector>

#include "doctest.h"
#include "metrics_oracle.hpp"
#include "synthetic.hpp"
#include "tabilp/error.hpp"
#include "tabilp/essential.hpp"
#include "tabilp/model.hpp"

namespace tabilp {
namespace {

QuestionInstance Question(const std::string& text, std::vector<std::string> options) {
  QuestionInstance q;
  q.id = "q";
  q.text = text;
  q.constituents = ChunkQuestion(text);
  q.options = std::move(options);
  return q;
}

Table MakeTable(std::string id, std::vector<std::string> headers,
                std::vector<std::vector<std::string>> rows) {
  Table t;
  t.id = id;
  t.title = std::move(id);
  t.headers = std::move(headers);
  t.rows = std::move(rows);
  return t;
}

TEST_CASE("proportion scorer counts essential labels") {
  const EtDataset train = ParseEtDataset(
      "# qid\tterm\tscore\n"
      "a\tfeathers\t0.9\n"
      "b\tfeathers\t0.8\n"
      "c\tfeathers\t0.7\n"
      "d\tfeathers\t0.1\n"
      "e\tfeathers\t0.0\n"
      "f\tFeather\t1.0\n");
  const PropScorer surf(train, PropMode::kSurface, 7);
  CHECK(surf.Score("feathers") == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(surf.Score("feather") == 1.0);
  // Lemmas pool "feathers" and "Feather": 4 of 6.
  const PropScorer lem(train, PropMode::kLemma, 7);
  CHECK(lem.Score("feathers") == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK(lem.Score("FEATHER") == lem.Score("feathers"));
}

TEST_CASE("unseen terms get a seeded reproducible guess") {
  const EtDataset train = ParseEtDataset("a\tcold\t1\n");
  const PropScorer a(train, PropMode::kSurface, 3);
  const PropScorer b(train, PropMode::kSurface, 3);
  const PropScorer c(train, PropMode::kSurface, 4);
  CHECK(!a.Proportion("zebra"));
  const double s = a.Score("zebra");
  CHECK(s >= 0.0);
  CHECK(s <= 1.0);
  CHECK(b.Score("zebra") == s);
  // Order of queries does not matter.
  CHECK(a.Score("yak") == b.Score("yak"));
  CHECK(a.Score("zebra") == s);
  CHECK(c.Score("zebra") != s);
}

TEST_CASE("dataset parsing") {
  const EtDataset d = ParseEtDataset("q1\tcold\t0.5\tWhat is cold?\nq1\tice\t0.25\n");
  REQUIRE(d.records.size() == 2);
  CHECK(d.records[0].label());
  CHECK(!d.records[1].label());
  CHECK(d.records[0].question == "What is cold?");
  CHECK(ParseEtDataset(SerializeEtDataset(d)).records == d.records);
  CHECK_THROWS_AS(ParseEtDataset("q1\tcold\n"), Error);
  CHECK_THROWS_AS(ParseEtDataset("q1\tcold\t1.5\n"), Error);
  CHECK_THROWS_AS(PropScorer(EtDataset{}, PropMode::kSurface, 0), Error);
}

TEST_CASE("pmi matches a hand count") {
  // Window 1: unigram positions 6, adjacent pairs 3. cold and weather meet
  // twice: log((2/3) / ((2/6) * (2/6))) = log 6.
  const Corpus corpus = BuildCorpusFromText("cold weather\ncold weather\nhot sand\n", 1);
  const NgramStats stats(corpus, 1);
  using G = NgramStats::Gram;
  CHECK(stats.Occurrences(G{0, {"cold"}}) == 2);
  CHECK(stats.CoOccurrences(G{0, {"cold"}}, G{0, {"weather"}}) == 2);
  CHECK(std::abs(stats.Pmi(G{0, {"cold"}}, G{0, {"weather"}}) - std::log(6.0)) <= 1e-9);
  CHECK(stats.Pmi(G{0, {"cold"}}, G{0, {"sand"}}) == 0.0);
  CHECK(stats.Pmi(G{0, {"cold"}}, G{0, {"absent"}}) == 0.0);
  // hot/sand: once in 3 pairs, each once in 6 positions: log(12).
  CHECK(std::abs(stats.Pmi(G{0, {"hot"}}, G{0, {"sand"}}) - std::log(12.0)) <= 1e-9);

  const QuestionInstance q = Question("cold", {"weather", "sand"});
  const PmiScorer max(std::make_shared<NgramStats>(corpus, 1), PmiReduce::kMax);
  const PmiScorer sum(std::make_shared<NgramStats>(corpus, 1), PmiReduce::kSum);
  CHECK(std::abs(max.Raw("cold", q) - std::log(6.0)) <= 1e-9);
  CHECK(std::abs(sum.Raw("cold", q) - std::log(6.0)) <= 1e-9);
  const double r = std::log(6.0);
  CHECK(std::abs(max.Score("cold", q) - r / (1.0 + r)) <= 1e-9);
}

TEST_CASE("max and sum reductions differ as defined") {
  const Corpus corpus = BuildCorpusFromText("cold weather\ncold ice\nhot sand\n", 1);
  auto stats = std::make_shared<NgramStats>(corpus, 1);
  const QuestionInstance q = Question("cold", {"weather", "ice"});
  using G = NgramStats::Gram;
  const double a = stats->Pmi(G{0, {"cold"}}, G{0, {"weather"}});
  const double b = stats->Pmi(G{0, {"cold"}}, G{0, {"ice"}});
  CHECK(PmiScorer(stats, PmiReduce::kMax).Raw("cold", q) == std::max(a, b));
  CHECK(PmiScorer(stats, PmiReduce::kSum).Raw("cold", q) == doctest::Approx(a + b));
}

TEST_CASE("pmi ignores sentence order") {
  const std::string lines[] = {"cold weather makes ice", "hot sand burns feet",
                               "ice melts in hot weather", "cold ice and cold water"};
  const Corpus fwd = BuildCorpusFromText(lines[0] + "\n" + lines[1] + "\n" + lines[2] + "\n" +
                                             lines[3] + "\n", 3);
  const Corpus rev = BuildCorpusFromText(lines[3] + "\n" + lines[2] + "\n" + lines[1] + "\n" +
                                             lines[0] + "\n", 3);
  const QuestionInstance q = Question("cold weather ice", {"hot sand", "melts"});
  for (PmiReduce red : {PmiReduce::kMax, PmiReduce::kSum}) {
    const PmiScorer a(std::make_shared<NgramStats>(fwd, 1), red);
    const PmiScorer b(std::make_shared<NgramStats>(rev, 1), red);
    for (const char* term : {"cold", "weather", "ice", "cold weather"}) {
      CHECK(a.Raw(term, q) == b.Raw(term, q));
    }
  }
}

TEST_CASE("average precision examples") {
  std::vector<ScoredTerm> one = {{"q", 0.9, false}, {"q", 0.1, true}};
  CHECK(AveragePrecision(one) == 0.5);
  std::vector<ScoredTerm> perfect = {{"q", 0.9, true}, {"q", 0.8, true}, {"q", 0.1, false}};
  CHECK(AveragePrecision(perfect) == 1.0);
  CHECK(ComputeEtMetrics(perfect, 0.5).map == 1.0);
}

TEST_CASE("predicting everything essential gives recall one and base-rate precision") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto items = testing::RandomScoredTerms(seed);
    for (ScoredTerm& t : items) t.score = 1.0;
    std::size_t pos = 0;
    for (const ScoredTerm& t : items) pos += t.label;
    if (pos == 0) continue;
    const EtMetrics m = ComputeEtMetrics(items, 0.5);
    CHECK(m.recall == 1.0);
    CHECK(m.precision == double(pos) / double(items.size()));
  }
}

TEST_CASE("metrics equal a definitional recomputation") {
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    CAPTURE(seed);
    const auto items = testing::RandomScoredTerms(seed);
    const double threshold = double(seed % 11) / 10.0;
    const EtMetrics got = ComputeEtMetrics(items, threshold);
    const EtMetrics want = testing::OracleMetrics(items, threshold);
    CHECK(got.map == want.map);
    CHECK(got.f1 == want.f1);
    CHECK(got.auc == want.auc);
    CHECK(got.precision == want.precision);
    CHECK(got.recall == want.recall);
    CHECK(got.accuracy == want.accuracy);
    CHECK(got.questions == want.questions);
    CHECK(got.auc >= 0.0);
    CHECK(got.auc <= 1.0);
  }
}

TEST_CASE("score files") {
  const auto s = ParseScoreFile(R"({"id": "q", "scores": {"Cold": 0.7, "ice": 0.1}})" "\n");
  const FileScorer f(s);
  const QuestionInstance q = Question("cold ice", {"a", "b"});
  CHECK(f.Score("cold", q) == 0.7);
  CHECK_THROWS_AS(f.Score("fire", q), Error);
  CHECK_THROWS_AS(ParseScoreFile(R"({"id": "q", "scores": {"x": 2}})"), Error);
  const std::vector<EtRecord> recs = {{"q", "cold", "", 0.7}, {"q", "ice", "", 0.1}};
  CHECK(ParseScoreFile(SerializeScoreFile(recs)) == s);
}

TEST_CASE("scorer factory") {
  const EtDataset train = ParseEtDataset("a\tcold\t1\n");
  const Corpus corpus = BuildCorpusFromText("cold weather\n", 2);
  CHECK(MakeTermScorer("prop-surf", &train, nullptr, 1, 0)->name() == "prop-surf");
  CHECK(MakeTermScorer("prop-lem", &train, nullptr, 1, 0)->name() == "prop-lem");
  CHECK(MakeTermScorer("max-pmi", nullptr, &corpus, 1, 0)->name() == "max-pmi");
  CHECK(MakeTermScorer("sum-pmi", nullptr, &corpus, 1, 0)->name() == "sum-pmi");
  CHECK_THROWS_AS(MakeTermScorer("max-pmi", nullptr, nullptr, 1, 0), Error);
  CHECK_THROWS_AS(MakeTermScorer("oracle", &train, &corpus, 1, 0), Error);
}

TEST_CASE("cascade answers at the first stage that does not abstain") {
  const std::vector<Table> tables = {MakeTable(
      "coverings", {"animal", "covering"}, {{"bird", "feathers"}, {"fish", "scales"}})};
  // "zebra" is never aligned, so forcing it makes the program infeasible.
  const QuestionInstance q = Question("which animal has feathers zebra", {"bird", "fish"});
  REQUIRE(q.constituents.size() == 3);
  const ReasonConfig cfg;

  SUBCASE("first stage equals a forced solve") {
    EssentialityProfile p;
    p.scores = {0.2, 0.9, 0.1};  // animal, feathers, zebra
    const AnswerResult r = RunCascade(tables, q, p, {0.4, 0.6, 0.8, 1.0}, cfg);
    REQUIRE(r.cascade_stage);
    CHECK(*r.cascade_stage == 0);
    TableIlp forced = BuildModel(tables, q, cfg.model);
    AddEssentialForcing(forced, p, 0.4);
    const AnswerResult direct = AnswerModel(forced, cfg);
    CHECK(r.chosen == direct.chosen);
    CHECK(r.objective == direct.objective);
    CHECK(r.chosen == std::vector<std::size_t>{0});
  }
  SUBCASE("later stage when the strict stages are infeasible") {
    EssentialityProfile p;
    p.scores = {0.2, 0.9, 0.7};
    const AnswerResult r = RunCascade(tables, q, p, {0.4, 0.6, 0.8, 1.0}, cfg);
    REQUIRE(r.cascade_stage);
    CHECK(*r.cascade_stage == 2);
    CHECK(r.chosen == std::vector<std::size_t>{0});
    const AnswerResult big = AnswerCascadeExtension(tables, q, p, {0.4, 0.6, 0.8, 1.0}, cfg);
    CHECK(big.chosen == r.chosen);
    CHECK(big.cascade_stage == r.cascade_stage);
  }
  SUBCASE("falls back to the unforced model") {
    EssentialityProfile p;
    p.scores = {0.2, 0.9, 0.95};
    const AnswerResult r = RunCascade(tables, q, p, {0.4, 0.6, 0.8}, cfg);
    REQUIRE(r.cascade_stage);
    CHECK(*r.cascade_stage == 3);
    CHECK(r.chosen == Answer(tables, q, cfg).chosen);
    const AnswerResult big = AnswerCascadeExtension(tables, q, p, {0.4, 0.6, 0.8}, cfg);
    CHECK(big.chosen == r.chosen);
    CHECK(big.cascade_stage == r.cascade_stage);
  }
  SUBCASE("profile length must match") {
    EssentialityProfile p;
    p.scores = {0.2};
    CHECK_THROWS_AS(RunCascade(tables, q, p, {0.4}, cfg), Error);
  }
}

}  // namespace
}  // namespace tabilp
