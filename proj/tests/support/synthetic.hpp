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
// Seeded synthetic table-QA instances built from pseudo-words, so alignment
// scores come only from planted overlaps.

#ifndef TABILP_TESTS_SYNTHETIC_HPP
#define TABILP_TESTS_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tabilp/kb.hpp"

namespace tabilp::testing {

struct SyntheticSpec {
  std::size_t tables = 2;
  std::size_t rows = 4;
  std::size_t columns = 3;
  std::size_t options = 4;
  std::size_t vocabulary = 40;
  std::size_t filler_words = 3;  // unrelated content words in the question
  bool which = true;             // phrase the question with "which"
  bool duplicate_options = false;
};

struct SyntheticInstance {
  std::vector<Table> tables;
  QuestionInstance question;
};

// Pronounceable pseudo-word for an index; never a stopword and never
// touched by the suffix stripper.
std::string PseudoWord(std::size_t index);

SyntheticInstance MakeInstance(std::uint64_t seed, const SyntheticSpec& spec = {});

// Many questions over one shared set of tables, plus a sentence corpus (one
// sentence per table row) and an essential-terms training set in which the
// planted cue of each question is the essential term.
struct SyntheticSuite {
  std::vector<Table> tables;
  std::vector<QuestionInstance> questions;
  std::string corpus;
  std::string et_train;
};

SyntheticSuite MakeSuite(std::uint64_t seed, std::size_t questions, const SyntheticSpec& spec = {});

// Writes tables/, questions.jsonl, corpus.txt and et_train.tsv under `dir`.
void WriteSuite(const SyntheticSuite& suite, const std::string& dir);

}  // namespace tabilp::testing

#endif  // TABILP_TESTS_SYNTHETIC_HPP
