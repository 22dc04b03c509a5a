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
#include "synthetic.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "tabilp/text.hpp"

namespace tabilp::testing {

std::string PseudoWord(std::size_t index) {
  static constexpr char kConsonants[] = "bdkmptz";
  static constexpr char kVowels[] = "aiou";
  std::string w;
  std::size_t v = index;
  for (int s = 0; s < 3; ++s) {
    w += kConsonants[v % 7];
    v /= 7;
    w += kVowels[v % 4];
    v /= 4;
  }
  // Distinguish indices beyond the three-syllable range.
  while (v > 0) {
    w += kConsonants[v % 7];
    w += 'a';
    v /= 7;
  }
  return w;
}

namespace {

using Rng = std::mt19937_64;

std::size_t Pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::vector<Table> MakeTables(Rng& rng, const SyntheticSpec& spec) {
  auto pick = [&](std::size_t n) { return Pick(rng, n); };
  auto word = [&] { return PseudoWord(pick(spec.vocabulary)); };
  std::vector<Table> out;
  for (std::size_t i = 0; i < spec.tables; ++i) {
    Table t;
    t.id = "syn-" + std::to_string(i);
    t.title = word() + " " + word();
    for (std::size_t k = 0; k < spec.columns; ++k) t.headers.push_back(word());
    for (std::size_t j = 0; j < spec.rows; ++j) {
      std::vector<std::string> row;
      for (std::size_t k = 0; k < spec.columns; ++k) {
        row.push_back(pick(3) == 0 ? word() + " " + word() : word());
      }
      t.rows.push_back(std::move(row));
    }
    out.push_back(std::move(t));
  }
  return out;
}

// Plants a fact: one row supplies a question cue and the answer. `cue`
// receives the cue text.
QuestionInstance PlantQuestion(Rng& rng, const std::vector<Table>& tables, const SyntheticSpec& spec,
                               std::string* cue) {
  auto pick = [&](std::size_t n) { return Pick(rng, n); };
  auto word = [&] { return PseudoWord(pick(spec.vocabulary)); };
  const Table& fact = tables[pick(spec.tables)];
  const auto& row = fact.rows[pick(spec.rows)];
  const std::size_t cue_col = pick(spec.columns);
  const std::size_t ans_col = spec.columns > 1 ? (cue_col + 1 + pick(spec.columns - 1)) % spec.columns
                                               : cue_col;
  std::vector<std::string> words;
  words.push_back(row[cue_col]);
  words.push_back(fact.headers[ans_col]);
  for (std::size_t f = 0; f < spec.filler_words; ++f) words.push_back(word());
  std::shuffle(words.begin() + 1, words.end(), rng);

  if (cue) *cue = row[cue_col];
  QuestionInstance q;
  q.text = spec.which ? "which " : "";
  for (std::size_t w = 0; w < words.size(); ++w) {
    q.text += words[w];
    q.text += w + 1 < words.size() ? (w % 2 == 0 ? " of the " : " is ") : "?";
  }
  q.constituents = ChunkQuestion(q.text);

  const std::size_t gold = pick(spec.options);
  for (std::size_t m = 0; m < spec.options; ++m) {
    if (m == gold) {
      q.options.push_back(row[ans_col]);
    } else if (spec.duplicate_options) {
      q.options.push_back(row[ans_col]);
    } else {
      // Distractors: other cells of the same column or fresh words.
      const auto& other = fact.rows[pick(spec.rows)];
      q.options.push_back(pick(2) == 0 ? other[ans_col] : word());
    }
  }
  q.gold = gold;
  return q;
}

}  // namespace

SyntheticInstance MakeInstance(std::uint64_t seed, const SyntheticSpec& spec) {
  Rng rng(seed);
  SyntheticInstance out;
  out.tables = MakeTables(rng, spec);
  out.question = PlantQuestion(rng, out.tables, spec, nullptr);
  out.question.id = "q" + std::to_string(seed);
  return out;
}

SyntheticSuite MakeSuite(std::uint64_t seed, std::size_t questions, const SyntheticSpec& spec) {
  Rng rng(seed);
  SyntheticSuite out;
  out.tables = MakeTables(rng, spec);
  for (std::size_t n = 0; n < questions; ++n) {
    std::string cue;
    QuestionInstance q = PlantQuestion(rng, out.tables, spec, &cue);
    q.id = "s" + std::to_string(n);
    // Half the questions go to the training set under their own ids.
    const std::vector<std::string> cue_stems = text::ContentStems(cue);
    for (const Constituent& c : q.constituents) {
      const auto stems = text::ContentStems(c.text);
      const bool essential =
          std::any_of(stems.begin(), stems.end(), [&](const std::string& s) {
            return std::find(cue_stems.begin(), cue_stems.end(), s) != cue_stems.end();
          });
      out.et_train += "t" + std::to_string(n) + "\t" + c.text + "\t" + (essential ? "1" : "0") +
                      "\t" + q.text + "\n";
    }
    out.questions.push_back(std::move(q));
  }
  for (const Table& t : out.tables) {
    for (const auto& row : t.rows) {
      std::string s = t.title;
      for (std::size_t k = 0; k < row.size(); ++k) s += " " + t.headers[k] + " " + row[k];
      out.corpus += s + "\n";
    }
  }
  return out;
}

void WriteSuite(const SyntheticSuite& suite, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root / "tables");
  auto write = [](const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + p.string());
  };
  write(root / "tables" / "synthetic.tsv", SerializeTables(suite.tables));
  write(root / "questions.jsonl", SerializeQuestions(suite.questions));
  write(root / "corpus.txt", suite.corpus);
  write(root / "et_train.tsv", suite.et_train);
}

}  // namespace tabilp::testing
