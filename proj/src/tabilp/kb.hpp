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

// Knowledge tables, question instances and the sentence corpus.
//
// Table TSV:
//   # comment
//   * <title>
//   @id <id>                          (optional; default "<file stem>-<n>")
//   @rel <k> <k'> <phrase>|<phrase>   (optional, any number)
//   <header>\t<header>...
//   <cell>\t<cell>...
//
// A new `*` line starts the next table in the same file. Everything is
// lowercased on ingestion.

#ifndef TABILP_KB_HPP
#define TABILP_KB_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tabilp {

struct RelationDecl {
  std::size_t column_a = 0;
  std::size_t column_b = 0;
  std::vector<std::string> triggers;  // may be empty

  bool operator==(const RelationDecl&) const = default;
};

struct Table {
  std::string id;
  std::string title;
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
  std::vector<RelationDecl> relations;

  std::size_t num_rows() const { return rows.size(); }
  std::size_t num_columns() const { return headers.size(); }

  bool operator==(const Table&) const = default;
};

// Throws Error(kInvalidArgument) naming the first broken invariant.
void ValidateTable(const Table& table);

struct Constituent {
  std::string text;
  std::size_t position = 0;  // raw token position in the question text

  bool operator==(const Constituent&) const = default;
};

struct QuestionInstance {
  std::string id;
  std::string text;
  std::vector<Constituent> constituents;
  std::vector<std::string> options;
  std::optional<std::size_t> gold;

  bool operator==(const QuestionInstance&) const = default;
};

void ValidateQuestion(const QuestionInstance& q);

// Token-level chunker: content tokens in order with their raw positions.
// Throws on empty text or when every token is a stopword.
std::vector<Constituent> ChunkQuestion(std::string_view text);

// Assigns raw token positions to pre-chunked constituents by scanning the
// question tokens left to right.
std::vector<Constituent> LocateConstituents(
    std::string_view text, const std::vector<std::string>& chunks);

// `path` is a .tsv file or a directory (all *.tsv, sorted by name).
std::vector<Table> LoadTables(const std::filesystem::path& path);
std::vector<Table> ParseTables(std::string_view content,
                               std::string_view default_id_prefix);
std::string SerializeTables(const std::vector<Table>& tables);

std::vector<QuestionInstance> LoadQuestions(const std::filesystem::path& path);
std::vector<QuestionInstance> ParseQuestions(std::string_view content);
std::string SerializeQuestions(const std::vector<QuestionInstance>& qs);

// Token and windowed pair statistics over a sentence-per-line corpus. Pairs
// are unordered and counted within sentence boundaries for token distance
// 1..window.
class Corpus {
 public:
  using Pair = std::pair<std::string, std::string>;

  Corpus(std::vector<std::vector<std::string>> sentences, std::size_t window);

  const std::vector<std::vector<std::string>>& sentences() const {
    return sentences_;
  }
  std::size_t window() const { return window_; }

  std::size_t token_count(std::string_view token) const;
  std::size_t pair_count(std::string_view a, std::string_view b) const;
  std::size_t total_tokens() const { return total_tokens_; }
  std::size_t total_pairs() const { return total_pairs_; }

  const std::map<Pair, std::size_t>& pair_counts() const {
    return pair_counts_;
  }
  const std::unordered_map<std::string, std::size_t>& token_counts() const {
    return token_counts_;
  }

 private:
  std::vector<std::vector<std::string>> sentences_;
  std::size_t window_;
  std::unordered_map<std::string, std::size_t> token_counts_;
  std::map<Pair, std::size_t> pair_counts_;  // key ordered (min, max)
  std::size_t total_tokens_ = 0;
  std::size_t total_pairs_ = 0;
};

Corpus BuildCorpus(const std::filesystem::path& path, std::size_t window);
Corpus BuildCorpusFromText(std::string_view content, std::size_t window);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace tabilp

#endif  // TABILP_KB_HPP
