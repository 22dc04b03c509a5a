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

#include "tabilp/kb.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tabilp/error.hpp"
#include "tabilp/text.hpp"

namespace tabilp {
namespace {

std::vector<std::string> SplitLines(std::string_view content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string line(content.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == content.size()) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find('\t', start);
    if (end == std::string_view::npos) {
      cells.push_back(text::ToLower(text::Trim(line.substr(start))));
      break;
    }
    cells.push_back(text::ToLower(text::Trim(line.substr(start, end - start))));
    start = end + 1;
  }
  return cells;
}

std::size_t ParseIndex(const std::string& s, std::size_t line_no) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) {
    ThrowParse("line " + std::to_string(line_no) + ": bad column index '" + s +
               "'");
  }
  return static_cast<std::size_t>(v);
}

RelationDecl ParseRelation(std::string_view rest, std::size_t line_no) {
  std::istringstream in{std::string(rest)};
  std::string a, b;
  in >> a >> b;
  RelationDecl decl;
  decl.column_a = ParseIndex(a, line_no);
  decl.column_b = ParseIndex(b, line_no);
  std::string phrases;
  std::getline(in, phrases);
  phrases = text::Trim(phrases);
  std::size_t start = 0;
  while (!phrases.empty() && start <= phrases.size()) {
    std::size_t end = phrases.find('|', start);
    if (end == std::string::npos) end = phrases.size();
    std::string p = text::ToLower(text::Trim(phrases.substr(start, end - start)));
    if (!p.empty()) decl.triggers.push_back(std::move(p));
    start = end + 1;
  }
  return decl;
}

}  // namespace

void ValidateTable(const Table& table) {
  const std::string where = "table '" + table.id + "'";
  if (table.id.empty()) ThrowInvalid("table with empty id");
  if (table.headers.empty()) ThrowInvalid(where + ": no headers");
  for (std::size_t k = 0; k < table.headers.size(); ++k) {
    if (text::Trim(table.headers[k]).empty()) {
      ThrowInvalid(where + ": header " + std::to_string(k) + " is empty");
    }
  }
  for (std::size_t j = 0; j < table.rows.size(); ++j) {
    if (table.rows[j].size() != table.headers.size()) {
      ThrowInvalid(where + ": row " + std::to_string(j) + " has " +
                   std::to_string(table.rows[j].size()) + " cells, expected " +
                   std::to_string(table.headers.size()));
    }
  }
  for (const RelationDecl& r : table.relations) {
    if (r.column_a >= table.headers.size() ||
        r.column_b >= table.headers.size() || r.column_a == r.column_b) {
      ThrowInvalid(where + ": relation (" + std::to_string(r.column_a) + ", " +
                   std::to_string(r.column_b) + ") references invalid columns");
    }
  }
}

void ValidateQuestion(const QuestionInstance& q) {
  const std::string where = "question '" + q.id + "'";
  if (q.constituents.empty()) ThrowInvalid(where + ": no constituents");
  if (q.options.size() < 2) ThrowInvalid(where + ": fewer than 2 options");
  if (q.gold && *q.gold >= q.options.size()) {
    ThrowInvalid(where + ": gold index " + std::to_string(*q.gold) +
                 " out of range");
  }
}

std::vector<Constituent> ChunkQuestion(std::string_view question) {
  if (text::Trim(question).empty()) ThrowInvalid("empty question text");
  std::vector<Constituent> out;
  for (text::Token& t : text::ContentTokens(question)) {
    out.push_back(Constituent{std::move(t.text), t.position});
  }
  if (out.empty()) ThrowInvalid("no content constituents");
  return out;
}

std::vector<Constituent> LocateConstituents(
    std::string_view question, const std::vector<std::string>& chunks) {
  const std::vector<text::Token> tokens = text::Tokenize(question);
  std::vector<Constituent> out;
  std::size_t cursor = 0;
  for (const std::string& chunk : chunks) {
    const std::vector<text::Token> chunk_tokens = text::Tokenize(chunk);
    std::size_t pos = cursor;
    if (!chunk_tokens.empty()) {
      for (std::size_t p = cursor; p < tokens.size(); ++p) {
        if (tokens[p].text == chunk_tokens.front().text) {
          pos = p;
          break;
        }
      }
    }
    out.push_back(Constituent{text::ToLower(text::Trim(chunk)), pos});
    cursor = pos + 1;
  }
  return out;
}

std::vector<Table> ParseTables(std::string_view content,
                               std::string_view default_id_prefix) {
  std::vector<Table> tables;
  // Line numbers are 1-based; `have_headers` tracks whether the current
  // table still expects its header line.
  bool have_headers = false;
  std::size_t line_no = 0;
  for (const std::string& raw : SplitLines(content)) {
    ++line_no;
    if (text::Trim(raw).empty() || raw.front() == '#') continue;
    if (raw.front() == '*') {
      Table t;
      t.id = std::string(default_id_prefix) + "-" + std::to_string(tables.size());
      t.title = text::ToLower(text::Trim(std::string_view(raw).substr(1)));
      tables.push_back(std::move(t));
      have_headers = false;
      continue;
    }
    if (tables.empty()) {
      ThrowParse("line " + std::to_string(line_no) +
                 ": content before the first '* <title>' line");
    }
    Table& t = tables.back();
    if (raw.rfind("@id", 0) == 0) {
      t.id = text::Trim(std::string_view(raw).substr(3));
      if (t.id.empty()) ThrowParse("line " + std::to_string(line_no) + ": empty @id");
      continue;
    }
    if (raw.rfind("@rel", 0) == 0) {
      t.relations.push_back(ParseRelation(std::string_view(raw).substr(4), line_no));
      continue;
    }
    std::vector<std::string> cells = SplitTabs(raw);
    if (!have_headers) {
      t.headers = std::move(cells);
      have_headers = true;
      continue;
    }
    if (cells.size() != t.headers.size()) {
      ThrowInvalid("table '" + t.id + "': row " + std::to_string(t.rows.size()) +
                   " (line " + std::to_string(line_no) + ") has " +
                   std::to_string(cells.size()) + " cells, expected " +
                   std::to_string(t.headers.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  for (const Table& t : tables) ValidateTable(t);
  return tables;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Table> LoadTables(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec)) ThrowIo("no such path '" + path.string() + "'");
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".tsv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<Table> out;
  std::set<std::string> ids;
  for (const fs::path& f : files) {
    for (Table& t : ParseTables(ReadFile(f), f.stem().string())) {
      if (!ids.insert(t.id).second) ThrowInvalid("duplicate table id '" + t.id + "'");
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::string SerializeTables(const std::vector<Table>& tables) {
  std::ostringstream out;
  for (const Table& t : tables) {
    out << "* " << t.title << "\n";
    out << "@id " << t.id << "\n";
    for (const RelationDecl& r : t.relations) {
      out << "@rel " << r.column_a << " " << r.column_b;
      for (std::size_t p = 0; p < r.triggers.size(); ++p) {
        out << (p == 0 ? " " : "|") << r.triggers[p];
      }
      out << "\n";
    }
    for (std::size_t k = 0; k < t.headers.size(); ++k) {
      out << (k ? "\t" : "") << t.headers[k];
    }
    out << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "\t" : "") << row[k];
      out << "\n";
    }
  }
  return out.str();
}

std::vector<QuestionInstance> ParseQuestions(std::string_view content) {
  using nlohmann::json;
  std::vector<QuestionInstance> out;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  for (const std::string& line : SplitLines(content)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      ThrowParse(where + ": malformed JSON: " + e.what());
    }
    QuestionInstance q;
    try {
      if (!j.is_object()) ThrowParse(where + ": expected an object");
      const json& id = j.at("id");
      q.id = id.is_string() ? id.get<std::string>() : id.dump();
      q.text = text::ToLower(text::Trim(j.at("text").get<std::string>()));
      for (const json& o : j.at("options")) {
        q.options.push_back(text::ToLower(text::Trim(o.get<std::string>())));
      }
      if (j.contains("gold") && !j["gold"].is_null()) {
        const long long g = j["gold"].get<long long>();
        if (g < 0) ThrowInvalid(where + ": gold index out of range");
        q.gold = static_cast<std::size_t>(g);
      }
      if (j.contains("constituents") && !j["constituents"].is_null()) {
        std::vector<std::string> chunks;
        for (const json& c : j["constituents"]) chunks.push_back(c.get<std::string>());
        q.constituents = LocateConstituents(q.text, chunks);
      } else {
        q.constituents = ChunkQuestion(q.text);
      }
    } catch (const json::exception& e) {
      ThrowParse(where + ": " + e.what());
    } catch (const Error& e) {
      if (std::string_view(e.what()).rfind("line ", 0) == 0) throw;
      throw Error(e.code(), where + ": " + e.what());
    }
    try {
      ValidateQuestion(q);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
    if (!ids.insert(q.id).second) ThrowInvalid(where + ": duplicate question id '" + q.id + "'");
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<QuestionInstance> LoadQuestions(const std::filesystem::path& path) {
  return ParseQuestions(ReadFile(path));
}

std::string SerializeQuestions(const std::vector<QuestionInstance>& qs) {
  using nlohmann::ordered_json;
  std::string out;
  for (const QuestionInstance& q : qs) {
    ordered_json j;
    j["id"] = q.id;
    j["text"] = q.text;
    j["options"] = q.options;
    ordered_json cons = ordered_json::array();
    for (const Constituent& c : q.constituents) cons.push_back(c.text);
    j["constituents"] = cons;
    if (q.gold) j["gold"] = *q.gold;
    out += j.dump();
    out += '\n';
  }
  return out;
}

Corpus::Corpus(std::vector<std::vector<std::string>> sentences, std::size_t window)
    : sentences_(std::move(sentences)), window_(window) {
  if (window_ == 0) ThrowInvalid("corpus window must be >= 1");
  for (const auto& s : sentences_) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      ++token_counts_[s[i]];
      ++total_tokens_;
      const std::size_t last = std::min(s.size(), i + window_ + 1);
      for (std::size_t j = i + 1; j < last; ++j) {
        const std::string& a = std::min(s[i], s[j]);
        const std::string& b = std::max(s[i], s[j]);
        ++pair_counts_[Pair(a, b)];
        ++total_pairs_;
      }
    }
  }
}

std::size_t Corpus::token_count(std::string_view token) const {
  auto it = token_counts_.find(std::string(token));
  return it == token_counts_.end() ? 0 : it->second;
}

std::size_t Corpus::pair_count(std::string_view a, std::string_view b) const {
  Pair key = a < b ? Pair(std::string(a), std::string(b))
                   : Pair(std::string(b), std::string(a));
  auto it = pair_counts_.find(key);
  return it == pair_counts_.end() ? 0 : it->second;
}

Corpus BuildCorpusFromText(std::string_view content, std::size_t window) {
  if (window == 0) ThrowInvalid("corpus window must be >= 1");
  std::vector<std::vector<std::string>> sentences;
  for (const std::string& line : SplitLines(content)) {
    std::vector<std::string> toks;
    for (text::Token& t : text::Tokenize(line)) toks.push_back(std::move(t.text));
    if (!toks.empty()) sentences.push_back(std::move(toks));
  }
  if (sentences.empty()) ThrowInvalid("corpus is empty");
  return Corpus(std::move(sentences), window);
}

Corpus BuildCorpus(const std::filesystem::path& path, std::size_t window) {
  return BuildCorpusFromText(ReadFile(path), window);
}

}  // namespace tabilp
