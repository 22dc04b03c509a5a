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

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "synthetic.hpp"
#include "tabilp/error.hpp"
#include "tabilp/kb.hpp"
#include "tabilp/text.hpp"

namespace tabilp {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("tabilp_kb_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path Write(const std::string& name, const std::string& content) const {
    const fs::path p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::vector<std::string> Texts(const std::vector<Constituent>& cs) {
  std::vector<std::string> out;
  for (const Constituent& c : cs) out.push_back(c.text);
  return out;
}

TEST_CASE("chunking drops stopwords and keeps order") {
  const auto chunks = ChunkQuestion("One way animals respond to a sudden drop in temperature");
  CHECK(Texts(chunks) == std::vector<std::string>{"one", "way", "animals", "respond", "sudden",
                                                  "drop", "temperature"});
  // Raw token positions survive for the proximity rows.
  CHECK(chunks[4].position == 6);
  CHECK(chunks[6].position == 9);
  CHECK_THROWS_AS(ChunkQuestion(""), Error);
  try {
    ChunkQuestion("the of a");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("no content constituents") != std::string::npos);
  }
}

TEST_CASE("chunking is deterministic and idempotent on its output") {
  const std::string text = "Which gas do green plants absorb from the air during photosynthesis?";
  const auto first = Texts(ChunkQuestion(text));
  CHECK(first == Texts(ChunkQuestion(text)));
  std::string joined;
  for (const std::string& t : first) joined += t + " ";
  CHECK(Texts(ChunkQuestion(joined)) == first);
}

TEST_CASE("light stemmer strips the listed suffixes") {
  CHECK(text::Stem("drops") == text::Stem("drop"));
  CHECK(text::Stem("boxes") == "box");
  CHECK(text::Stem("melting") == "melt");
  CHECK(text::Stem("melted") == "melt");
  CHECK(text::Stem("gas") == "gas");
}

TEST_CASE("table file parses titles headers and rows") {
  const auto tables = ParseTables("# comment\n* Energy\nsource\ttype\nsun\trenewable\n"
                                  "coal\tnonrenewable\nwind\trenewable\n",
                                  "f");
  REQUIRE(tables.size() == 1);
  CHECK(tables[0].title == "energy");
  CHECK(tables[0].num_columns() == 2);
  CHECK(tables[0].num_rows() == 3);
  CHECK(tables[0].id == "f-0");
}

TEST_CASE("ragged row names its row") {
  try {
    ParseTables("* t\n@id tiny\na\tb\nx\ty\nx\ty\tz\n", "f");
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("tiny") != std::string::npos);
    CHECK(what.find("row 1") != std::string::npos);
  }
}

TEST_CASE("table invariants are enforced") {
  CHECK_THROWS_AS(ParseTables("* t\na\t \nx\ty\n", "f"), Error);
  CHECK_THROWS_AS(ParseTables("* t\n@rel 0 0 of\na\tb\nx\ty\n", "f"), Error);
  CHECK_THROWS_AS(ParseTables("* t\n@rel 0 5 of\na\tb\nx\ty\n", "f"), Error);
  CHECK_THROWS_AS(ParseTables("a\tb\n", "f"), Error);
}

TEST_CASE("directory loading keeps ids distinct and stable") {
  TempDir dir;
  dir.Write("b.tsv", "* second\nx\ty\n1\t2\n");
  dir.Write("a.tsv", "* first\n@id first\np\tq\nr\ts\n* third\nu\tv\nw\tz\n");
  const auto once = LoadTables(dir.path());
  const auto twice = LoadTables(dir.path());
  REQUIRE(once.size() == 3);
  CHECK(once[0].id == "first");
  CHECK(once[1].id == "a-1");
  CHECK(once[2].id == "b-0");
  CHECK(SerializeTables(once) == SerializeTables(twice));

  dir.Write("c.tsv", "* dup\n@id first\nm\tn\no\tp\n");
  CHECK_THROWS_AS(LoadTables(dir.path()), Error);
}

TEST_CASE("table serialization round-trips") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = testing::MakeInstance(seed);
    auto tables = inst.tables;
    tables[0].relations.push_back({0, 1, {"is a", "has"}});
    const auto back = ParseTables(SerializeTables(tables), "x");
    CHECK(back == tables);
  }
}

TEST_CASE("question records") {
  const std::string good =
      R"({"id": "a", "text": "Which animal has feathers?", "options": ["bird", "fish"], "gold": 0})"
      "\n"
      R"({"id": "b", "text": "Which animal has feathers?", "options": ["bird", "fish"], )"
      R"("constituents": ["animal has", "feathers"]})"
      "\n";
  const auto qs = ParseQuestions(good);
  REQUIRE(qs.size() == 2);
  CHECK(Texts(qs[0].constituents) == std::vector<std::string>{"animal", "feathers"});
  CHECK(qs[0].gold == std::optional<std::size_t>(0));
  // Pre-chunked constituents are taken verbatim.
  CHECK(Texts(qs[1].constituents) == std::vector<std::string>{"animal has", "feathers"});
  CHECK(!qs[1].gold);

  CHECK_THROWS_AS(ParseQuestions(R"({"id": "a", "text": "cats", "options": ["x"]})"), Error);
  CHECK_THROWS_AS(ParseQuestions(R"({"id": "a", "text": "cats", "options": ["x", "y"], "gold": 2})"),
                  Error);
}

TEST_CASE("malformed question line is cited") {
  std::string content;
  for (int i = 0; i < 6; ++i) {
    content += R"({"id": ")" + std::to_string(i) + R"(", "text": "cats", "options": ["x", "y"]})" "\n";
  }
  content += "{not json\n";
  try {
    ParseQuestions(content);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
  }
}

TEST_CASE("question serialization round-trips") {
  std::vector<QuestionInstance> qs;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto q = testing::MakeInstance(seed).question;
    q.id = "s" + std::to_string(seed);
    qs.push_back(q);
  }
  CHECK(ParseQuestions(SerializeQuestions(qs)) == qs);
}

TEST_CASE("corpus pair counts") {
  const Corpus ab = BuildCorpusFromText("a b\n", 2);
  CHECK(ab.pair_count("a", "b") == 1);
  const Corpus aba = BuildCorpusFromText("a b a\n", 1);
  CHECK(aba.pair_count("a", "b") == 2);
  CHECK(aba.pair_count("b", "a") == 2);
  CHECK(aba.token_count("a") == 2);
  CHECK_THROWS_AS(BuildCorpusFromText("a b\n", 0), Error);
  CHECK_THROWS_AS(BuildCorpusFromText("", 1), Error);
}

TEST_CASE("corpus counts match a brute-force double loop") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> words = {"cold", "hot", "sand", "weather", "ice", "water"};
  for (int trial = 0; trial < 30; ++trial) {
    std::string text;
    std::vector<std::vector<std::string>> sentences;
    const int lines = 1 + static_cast<int>(rng() % 5);
    for (int s = 0; s < lines; ++s) {
      std::vector<std::string> sent;
      const int len = 1 + static_cast<int>(rng() % 8);
      for (int t = 0; t < len; ++t) sent.push_back(words[rng() % words.size()]);
      for (const auto& w : sent) text += w + " ";
      text += "\n";
      sentences.push_back(sent);
    }
    const std::size_t window = 1 + rng() % 4;
    const Corpus c = BuildCorpusFromText(text, window);

    std::map<std::pair<std::string, std::string>, std::size_t> expect;
    std::size_t total = 0;
    for (const auto& s : sentences) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
          if (j <= i || j - i > window) continue;
          ++expect[{std::min(s[i], s[j]), std::max(s[i], s[j])}];
          ++total;
        }
      }
    }
    CHECK(c.total_pairs() == total);
    std::size_t sum = 0;
    for (const auto& [pair, n] : c.pair_counts()) {
      sum += n;
      CHECK(expect[pair] == n);
      // Unordered pairs: each occurrence of the rarer token has at most
      // `window` partners on either side ("a b a" at window 1 counts 2).
      CHECK(n <= std::min(c.token_count(pair.first), c.token_count(pair.second)) * 2 * window);
      CHECK(c.pair_count(pair.first, pair.second) == c.pair_count(pair.second, pair.first));
    }
    CHECK(sum == total);
  }
}

}  // namespace
}  // namespace tabilp
