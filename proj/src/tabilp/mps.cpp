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

#include "tabilp/mps.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "tabilp/error.hpp"
#include "tabilp/kb.hpp"

namespace tabilp {
namespace {

std::string Code(char prefix, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%07zu", prefix, index);
  return buf;
}

std::string Number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseNumber(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    ThrowParse("MPS line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

// Fixed-column entry: fields start at columns 5, 15 and 25.
std::string Entry(const std::string& f2, const std::string& f3, const std::string& f4) {
  std::string line = "    " + f2;
  line.resize(std::max<std::size_t>(line.size(), 14), ' ');
  line += f3;
  if (!f4.empty()) {
    line.resize(std::max<std::size_t>(line.size() + 2, 24), ' ');
    line += f4;
  }
  return line;
}

std::vector<std::string> Fields(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

// First `n` whitespace-separated fields; `rest` receives the remainder with
// leading blanks removed.
std::vector<std::string> SplitHead(const std::string& s, std::size_t n, std::string& rest) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (out.size() < n) {
    pos = s.find_first_not_of(" \t", pos);
    if (pos == std::string::npos) break;
    const std::size_t end = std::min(s.find_first_of(" \t", pos), s.size());
    out.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  const std::size_t b = pos == std::string::npos ? std::string::npos : s.find_first_not_of(" \t", pos);
  rest = b == std::string::npos ? "" : s.substr(b);
  return out;
}

}  // namespace

std::string ToMps(const IlpProblem& problem) {
  problem.Validate();
  if (problem.num_variables() == 0) ThrowInvalid("nothing to export");
  const auto& vars = problem.variables();
  const auto& cons = problem.constraints();

  std::ostringstream out;
  out << "* 0/1 program exported by tabilp (maximize)\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    out << "* VAR " << Code('X', j) << ' ' << (vars[j].cascade_indicator ? 1 : 0) << ' '
        << vars[j].name << '\n';
  }
  for (std::size_t i = 0; i < cons.size(); ++i) {
    out << "* ROW " << Code('R', i) << ' ' << cons[i].tag << '\n';
  }
  out << "NAME          TABILP\n";
  out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n";
  out << " N  OBJ\n";
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const char* s = cons[i].sense == Sense::kLe ? "L" : cons[i].sense == Sense::kGe ? "G" : "E";
    out << ' ' << s << "  " << Code('R', i) << '\n';
  }

  // Column-major view of the constraint matrix.
  std::vector<std::vector<std::pair<std::size_t, double>>> columns(vars.size());
  for (std::size_t i = 0; i < cons.size(); ++i) {
    for (const Term& t : cons[i].terms) columns[t.var].emplace_back(i, t.coef);
  }
  out << "COLUMNS\n";
  out << "    MARKER                 'MARKER'                 'INTORG'\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const std::string name = Code('X', j);
    out << Entry(name, "OBJ", Number(vars[j].weight)) << '\n';
    for (const auto& [row, coef] : columns[j]) {
      out << Entry(name, Code('R', row), Number(coef)) << '\n';
    }
  }
  out << "    MARKER                 'MARKER'                 'INTEND'\n";
  out << "RHS\n";
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].rhs != 0.0) out << Entry("RHS", Code('R', i), Number(cons[i].rhs)) << '\n';
  }
  out << "BOUNDS\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    out << " BV BND       " << Code('X', j) << '\n';
  }
  out << "ENDATA\n";
  return out.str();
}

IlpProblem FromMps(std::string_view content) {
  enum class Section { kNone, kName, kObjSense, kRows, kColumns, kRhs, kBounds, kEnd };
  Section section = Section::kNone;

  std::map<std::string, std::pair<bool, std::string>> var_meta;  // code -> (indicator, name)
  std::map<std::string, std::string> row_tags;
  std::string objective_row;
  bool minimize = false;

  struct RowData {
    Sense sense = Sense::kLe;
    double rhs = 0.0;
    std::vector<Term> terms;
  };
  std::vector<std::string> row_order;
  std::unordered_map<std::string, RowData> rows;
  std::vector<std::string> col_order;
  std::unordered_map<std::string, std::size_t> col_index;
  std::vector<double> weights;
  std::vector<bool> binary;

  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = "MPS line " + std::to_string(line_no);
    if (line.empty()) continue;
    if (line[0] == '*') {
      std::string rest;
      std::vector<std::string> head = SplitHead(line.substr(1), 2, rest);
      if (head.size() == 2 && head[0] == "VAR") {
        std::vector<std::string> flag = SplitHead(rest, 1, rest);
        var_meta[head[1]] = {!flag.empty() && flag[0] == "1", rest};
      } else if (head.size() == 2 && head[0] == "ROW") {
        row_tags[head[1]] = rest;
      }
      continue;
    }
    std::vector<std::string> f = Fields(line);
    if (f.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& head = f[0];
      if (head == "NAME") section = Section::kName;
      else if (head == "OBJSENSE") {
        section = Section::kObjSense;
        if (f.size() > 1) minimize = f[1] == "MIN" || f[1] == "MINIMIZE";
      } else if (head == "ROWS") section = Section::kRows;
      else if (head == "COLUMNS") section = Section::kColumns;
      else if (head == "RHS") section = Section::kRhs;
      else if (head == "BOUNDS") section = Section::kBounds;
      else if (head == "ENDATA") section = Section::kEnd;
      else if (head == "RANGES") ThrowParse(where + ": RANGES are not supported");
      else ThrowParse(where + ": unknown section '" + head + "'");
      continue;
    }
    switch (section) {
      case Section::kObjSense:
        minimize = f[0] == "MIN" || f[0] == "MINIMIZE";
        break;
      case Section::kRows: {
        if (f.size() != 2) ThrowParse(where + ": malformed row");
        if (f[0] == "N") {
          if (objective_row.empty()) objective_row = f[1];
          break;
        }
        RowData r;
        if (f[0] == "L") r.sense = Sense::kLe;
        else if (f[0] == "G") r.sense = Sense::kGe;
        else if (f[0] == "E") r.sense = Sense::kEq;
        else ThrowParse(where + ": unknown row type '" + f[0] + "'");
        if (rows.count(f[1])) ThrowParse(where + ": duplicate row '" + f[1] + "'");
        row_order.push_back(f[1]);
        rows.emplace(f[1], std::move(r));
        break;
      }
      case Section::kColumns: {
        if (f.size() >= 3 && f[1] == "'MARKER'") break;
        if (f.size() != 3 && f.size() != 5) ThrowParse(where + ": malformed column entry");
        auto [it, inserted] = col_index.emplace(f[0], col_order.size());
        if (inserted) {
          col_order.push_back(f[0]);
          weights.push_back(0.0);
          binary.push_back(false);
        }
        for (std::size_t p = 1; p + 1 < f.size(); p += 2) {
          const double v = ParseNumber(f[p + 1], line_no);
          if (f[p] == objective_row) {
            weights[it->second] = v;
          } else {
            auto r = rows.find(f[p]);
            if (r == rows.end()) ThrowParse(where + ": unknown row '" + f[p] + "'");
            r->second.terms.push_back(Term{static_cast<VarId>(it->second), v});
          }
        }
        break;
      }
      case Section::kRhs: {
        if (f.size() != 3 && f.size() != 5) ThrowParse(where + ": malformed RHS entry");
        for (std::size_t p = 1; p + 1 < f.size(); p += 2) {
          const double v = ParseNumber(f[p + 1], line_no);
          if (f[p] == objective_row) continue;
          auto r = rows.find(f[p]);
          if (r == rows.end()) ThrowParse(where + ": unknown row '" + f[p] + "'");
          r->second.rhs = v;
        }
        break;
      }
      case Section::kBounds: {
        if (f.size() < 3) ThrowParse(where + ": malformed bound");
        auto c = col_index.find(f[2]);
        if (c == col_index.end()) ThrowParse(where + ": unknown column '" + f[2] + "'");
        if (f[0] == "BV") {
          binary[c->second] = true;
        } else if ((f[0] == "UP" && f.size() == 4 && ParseNumber(f[3], line_no) == 1.0) ||
                   (f[0] == "LO" && f.size() == 4 && ParseNumber(f[3], line_no) == 0.0)) {
          binary[c->second] = true;
        } else {
          ThrowParse(where + ": only binary variables are supported");
        }
        break;
      }
      default:
        ThrowParse(where + ": data outside a section");
    }
  }
  if (section != Section::kEnd) ThrowParse("MPS file lacks ENDATA");
  for (std::size_t j = 0; j < col_order.size(); ++j) {
    if (!binary[j]) ThrowParse("column '" + col_order[j] + "' is not declared binary");
  }

  IlpProblem p;
  for (std::size_t j = 0; j < col_order.size(); ++j) {
    auto meta = var_meta.find(col_order[j]);
    const bool indicator = meta != var_meta.end() && meta->second.first;
    std::string name = meta != var_meta.end() && !meta->second.second.empty()
                           ? meta->second.second
                           : col_order[j];
    p.AddVariable(std::move(name), minimize ? -weights[j] : weights[j], indicator);
  }
  for (const std::string& code : row_order) {
    RowData& r = rows.at(code);
    auto tag = row_tags.find(code);
    p.AddConstraint(std::move(r.terms), r.sense, r.rhs,
                    tag != row_tags.end() ? tag->second : code);
  }
  return p;
}

void WriteMps(const IlpProblem& problem, const std::filesystem::path& path) {
  const std::string content = ToMps(problem);
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowIo("cannot write '" + path.string() + "'");
  out << content;
  if (!out) ThrowIo("failed writing '" + path.string() + "'");
}

IlpProblem ReadMps(const std::filesystem::path& path) { return FromMps(ReadFile(path)); }

}  // namespace tabilp
