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

#include "tabilp/essential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tabilp/error.hpp"
#include "tabilp/text.hpp"

namespace tabilp {
namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> Lines(std::string_view content) {
  std::vector<std::string> out;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
  }
  return out;
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

double ParseScore(const std::string& s, const std::string& where) {
  const std::string t = text::Trim(s);
  double v = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    ThrowParse(where + ": bad score '" + s + "'");
  }
  if (!(v >= 0.0 && v <= 1.0)) ThrowParse(where + ": score must lie in [0, 1]");
  return v;
}

std::vector<std::string> RawTokens(std::string_view s) {
  std::vector<std::string> out;
  for (text::Token& t : text::Tokenize(s)) out.push_back(std::move(t.text));
  return out;
}

// FNV-1a, for per-term seeds.
std::uint64_t Hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

EtDataset ParseEtDataset(std::string_view content) {
  EtDataset data;
  std::size_t line_no = 0;
  for (const std::string& line : Lines(content)) {
    ++line_no;
    if (text::Trim(line).empty() || line[0] == '#') continue;
    const std::string where = "dataset line " + std::to_string(line_no);
    std::vector<std::string> f = SplitTabs(line);
    if (f.size() != 3 && f.size() != 4) ThrowParse(where + ": expected 3 or 4 tab-separated fields");
    EtRecord r;
    r.question_id = text::Trim(f[0]);
    r.term = text::ToLower(text::Trim(f[1]));
    if (r.question_id.empty() || r.term.empty()) ThrowParse(where + ": empty question id or term");
    r.score = ParseScore(f[2], where);
    if (f.size() == 4) r.question = text::Trim(f[3]);
    data.records.push_back(std::move(r));
  }
  return data;
}

EtDataset LoadEtDataset(const std::filesystem::path& path) { return ParseEtDataset(ReadFile(path)); }

std::string SerializeEtDataset(const EtDataset& data) {
  std::ostringstream out;
  for (const EtRecord& r : data.records) {
    out << r.question_id << '\t' << r.term << '\t' << r.score;
    if (!r.question.empty()) out << '\t' << r.question;
    out << '\n';
  }
  return out.str();
}

EssentialityProfile ScoreQuestion(const TermScorer& scorer, const QuestionInstance& q) {
  EssentialityProfile p;
  p.scorer = scorer.name();
  for (const Constituent& c : q.constituents) p.scores.push_back(scorer.Score(c.text, q));
  p.Validate(q.constituents.size());
  return p;
}

PropScorer::PropScorer(const EtDataset& train, PropMode mode, std::uint64_t seed)
    : mode_(mode), seed_(seed) {
  if (train.records.empty()) ThrowInvalid("proportion scorer needs a non-empty training set");
  for (const EtRecord& r : train.records) {
    auto& [positive, total] = counts_[Key(r.term)];
    positive += r.label();
    ++total;
  }
}

std::string PropScorer::name() const {
  return mode_ == PropMode::kSurface ? "prop-surf" : "prop-lem";
}

std::string PropScorer::Key(std::string_view term) const {
  if (mode_ == PropMode::kSurface) return text::ToLower(text::Trim(term));
  std::string key;
  for (const std::string& t : RawTokens(term)) {
    if (!key.empty()) key += ' ';
    key += text::Stem(t);
  }
  return key;
}

std::optional<double> PropScorer::Proportion(std::string_view term) const {
  auto it = counts_.find(Key(term));
  if (it == counts_.end()) return std::nullopt;
  return static_cast<double>(it->second.first) / static_cast<double>(it->second.second);
}

double PropScorer::Score(std::string_view term) const {
  if (auto p = Proportion(term)) return *p;
  std::mt19937_64 gen(seed_ ^ Hash(Key(term)));
  return std::uniform_real_distribution<double>(0.0, 1.0)(gen);
}

double PropScorer::Score(std::string_view term, const QuestionInstance&) const {
  return Score(term);
}

NgramStats::NgramStats(const Corpus& corpus, std::size_t skip)
    : sentences_(corpus.sentences()), window_(corpus.window()), skip_(skip) {
  if (skip_ == 0) ThrowInvalid("skip-bigram distance must be >= 1");
  for (std::uint32_t s = 0; s < sentences_.size(); ++s) {
    const auto& sent = sentences_[s];
    for (std::uint32_t i = 0; i < sent.size(); ++i) index_[sent[i]].push_back({s, i});
    const std::size_t n = sent.size();
    std::size_t ext[4];
    for (int k = 0; k < 4; ++k) {
      ext[k] = Extent(k);
      if (n >= ext[k]) positions_[k] += n - ext[k] + 1;
    }
    // Ordered occurrence pairs with the kind-b gram after the kind-a gram.
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        std::size_t count = 0;
        for (std::size_t gap = 1; gap <= window_; ++gap) {
          const std::size_t span = ext[a] + ext[b] + gap - 1;
          if (span > n) break;
          count += n - span + 1;
        }
        pairs_[a][b] += count;
      }
    }
  }
}

std::size_t NgramStats::Extent(int kind) const {
  switch (kind) {
    case 0: return 1;
    case 1: return 2;
    case 2: return 3;
    default: return skip_ + 2;
  }
}

std::vector<NgramStats::Position> NgramStats::Find(const Gram& g) const {
  static const std::size_t kArity[4] = {1, 2, 3, 2};
  if (g.kind < 0 || g.kind > 3 || g.tokens.size() != kArity[g.kind]) {
    ThrowInvalid("n-gram arity does not match its kind");
  }
  std::vector<Position> out;
  auto it = index_.find(g.tokens[0]);
  if (it == index_.end()) return out;
  const std::size_t ext = Extent(g.kind);
  for (const Position& p : it->second) {
    const auto& sent = sentences_[p.sentence];
    if (p.start + ext > sent.size()) continue;
    bool match = true;
    if (g.kind == 3) {
      match = sent[p.start + ext - 1] == g.tokens[1];
    } else {
      for (std::size_t t = 1; t < g.tokens.size() && match; ++t) {
        match = sent[p.start + t] == g.tokens[t];
      }
    }
    if (match) out.push_back(p);
  }
  return out;
}

std::size_t NgramStats::Occurrences(const Gram& g) const { return Find(g).size(); }

std::size_t NgramStats::CoOccurrences(const Gram& x, const Gram& y) const {
  const std::vector<Position> px = Find(x);
  const std::vector<Position> py = Find(y);
  const std::size_t ex = Extent(x.kind), ey = Extent(y.kind);
  std::size_t count = 0;
  for (const Position& a : px) {
    for (const Position& b : py) {
      if (a.sentence != b.sentence) continue;
      std::size_t gap;
      if (b.start >= a.start + ex) {
        gap = b.start - (a.start + ex - 1);
      } else if (a.start >= b.start + ey) {
        gap = a.start - (b.start + ey - 1);
      } else {
        continue;
      }
      if (gap <= window_) ++count;
    }
  }
  // The same gram on both sides sees every unordered pair twice.
  if (x.kind == y.kind && x.tokens == y.tokens) count /= 2;
  return count;
}

double NgramStats::Pmi(const Gram& x, const Gram& y) const {
  const std::size_t cx = Occurrences(x), cy = Occurrences(y);
  if (cx == 0 || cy == 0) return 0.0;
  const std::size_t cxy = CoOccurrences(x, y);
  if (cxy == 0) return 0.0;
  // Same-kind pairs are unordered, mixed-kind pairs are ordered by kind.
  double total = x.kind == y.kind ? static_cast<double>(pairs_[x.kind][x.kind])
                                  : static_cast<double>(pairs_[x.kind][y.kind] + pairs_[y.kind][x.kind]);
  const double pxy = static_cast<double>(cxy) / total;
  const double px = static_cast<double>(cx) / static_cast<double>(positions_[x.kind]);
  const double py = static_cast<double>(cy) / static_cast<double>(positions_[y.kind]);
  return std::log(pxy / (px * py));
}

std::vector<NgramStats::Gram> NgramStats::Grams(const std::vector<std::string>& tokens) const {
  std::set<std::pair<int, std::vector<std::string>>> seen;
  std::vector<Gram> out;
  auto add = [&](int kind, std::vector<std::string> toks) {
    if (std::all_of(toks.begin(), toks.end(), [](const std::string& t) { return text::IsStopword(t); })) {
      return;
    }
    if (seen.emplace(kind, toks).second) out.push_back(Gram{kind, std::move(toks)});
  };
  const std::size_t n = tokens.size();
  for (std::size_t i = 0; i < n; ++i) {
    add(0, {tokens[i]});
    if (i + 1 < n) add(1, {tokens[i], tokens[i + 1]});
    if (i + 2 < n) add(2, {tokens[i], tokens[i + 1], tokens[i + 2]});
    if (i + skip_ + 1 < n) add(3, {tokens[i], tokens[i + skip_ + 1]});
  }
  return out;
}

PmiScorer::PmiScorer(std::shared_ptr<const NgramStats> stats, PmiReduce reduce)
    : stats_(std::move(stats)), reduce_(reduce) {
  if (!stats_) ThrowInvalid("PMI scorer needs corpus statistics");
}

std::string PmiScorer::name() const { return reduce_ == PmiReduce::kMax ? "max-pmi" : "sum-pmi"; }

double PmiScorer::Raw(std::string_view term, const QuestionInstance& q) const {
  const std::vector<std::string> toks = RawTokens(term);
  if (toks.empty()) return 0.0;
  // A term of up to three tokens is one n-gram; longer terms take the best
  // of their single tokens.
  std::vector<NgramStats::Gram> xs;
  if (toks.size() <= 3) {
    xs.push_back({static_cast<int>(toks.size()) - 1, toks});
  } else {
    for (const std::string& t : toks) xs.push_back({0, {t}});
  }
  double best = 0.0;
  bool any = false;
  for (const NgramStats::Gram& x : xs) {
    double acc = 0.0;
    bool seen = false;
    for (const std::string& option : q.options) {
      for (const NgramStats::Gram& y : stats_->Grams(RawTokens(option))) {
        const double v = stats_->Pmi(x, y);
        if (reduce_ == PmiReduce::kSum) {
          acc += v;
        } else {
          acc = seen ? std::max(acc, v) : v;
        }
        seen = true;
      }
    }
    if (!any || acc > best) best = acc;
    any = true;
  }
  return best;
}

double PmiScorer::Score(std::string_view term, const QuestionInstance& q) const {
  const double r = std::max(0.0, Raw(term, q));
  return r / (1.0 + r);
}

FileScorer::FileScorer(std::map<std::string, std::map<std::string, double>> scores)
    : scores_(std::move(scores)) {}

double FileScorer::Score(std::string_view term, const QuestionInstance& q) const {
  auto qi = scores_.find(q.id);
  if (qi == scores_.end()) ThrowInvalid("score file has no entry for question '" + q.id + "'");
  auto ti = qi->second.find(text::ToLower(text::Trim(term)));
  if (ti == qi->second.end()) {
    ThrowInvalid("score file has no score for term '" + std::string(term) + "' of question '" +
                 q.id + "'");
  }
  return ti->second;
}

std::map<std::string, std::map<std::string, double>> ParseScoreFile(std::string_view content) {
  std::map<std::string, std::map<std::string, double>> out;
  std::size_t line_no = 0;
  for (const std::string& line : Lines(content)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    const std::string where = "score file line " + std::to_string(line_no);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      ThrowParse(where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("scores") ||
        !j["scores"].is_object()) {
      ThrowParse(where + ": expected {\"id\": string, \"scores\": object}");
    }
    auto& bucket = out[j["id"].get<std::string>()];
    for (const auto& [term, v] : j["scores"].items()) {
      if (!v.is_number()) ThrowParse(where + ": score for '" + term + "' is not a number");
      const double s = v.get<double>();
      if (!(s >= 0.0 && s <= 1.0)) ThrowParse(where + ": score must lie in [0, 1]");
      bucket[text::ToLower(text::Trim(term))] = s;
    }
  }
  return out;
}

std::map<std::string, std::map<std::string, double>> LoadScoreFile(
    const std::filesystem::path& path) {
  return ParseScoreFile(ReadFile(path));
}

std::string SerializeScoreFile(const std::vector<EtRecord>& scored) {
  std::vector<std::string> order;
  std::map<std::string, Json> groups;
  for (const EtRecord& r : scored) {
    auto [it, inserted] = groups.emplace(r.question_id, Json::object());
    if (inserted) order.push_back(r.question_id);
    it->second[r.term] = r.score;
  }
  std::string out;
  for (const std::string& id : order) {
    Json j;
    j["id"] = id;
    j["scores"] = groups[id];
    out += j.dump() + "\n";
  }
  return out;
}

std::shared_ptr<const TermScorer> MakeTermScorer(std::string_view name, const EtDataset* train,
                                                 const Corpus* corpus, std::size_t skip,
                                                 std::uint64_t seed) {
  if (name == "prop-surf" || name == "prop-lem") {
    if (!train) ThrowInvalid(std::string(name) + " needs a training set");
    return std::make_shared<PropScorer>(*train, name == "prop-surf" ? PropMode::kSurface
                                                                    : PropMode::kLemma,
                                        seed);
  }
  if (name == "max-pmi" || name == "sum-pmi") {
    if (!corpus) ThrowInvalid(std::string(name) + " needs a corpus");
    return std::make_shared<PmiScorer>(std::make_shared<NgramStats>(*corpus, skip),
                                       name == "max-pmi" ? PmiReduce::kMax : PmiReduce::kSum);
  }
  ThrowInvalid("unknown term scorer '" + std::string(name) + "'");
}

AnswerResult RunCascade(const std::vector<Table>& tables, const QuestionInstance& q,
                        const EssentialityProfile& profile,
                        const std::vector<double>& thresholds, const ReasonConfig& config) {
  ValidateQuestion(q);
  ValidateThresholds(thresholds);
  const TableIlp base = BuildModel(tables, q, config.model);
  profile.Validate(base.num_constituents);
  SolverStats stats;
  std::size_t solves = 0;
  auto finish = [&](AnswerResult r, std::size_t stage) {
    r.cascade_stage = stage;
    stats.nodes += r.stats.nodes;
    stats.lp_iterations += r.stats.lp_iterations;
    stats.wall_seconds += r.stats.wall_seconds;
    r.stats = stats;
    r.solves += solves;
    return r;
  };
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    TableIlp forced = base;
    AddEssentialForcing(forced, profile, thresholds[j]);
    AnswerResult r = AnswerModel(forced, config);
    if (!r.abstained()) return finish(std::move(r), j);
    solves += r.solves;
    stats.nodes += r.stats.nodes;
    stats.lp_iterations += r.stats.lp_iterations;
    stats.wall_seconds += r.stats.wall_seconds;
  }
  return finish(AnswerModel(base, config), thresholds.size());
}

AnswerResult AnswerCascadeExtension(const std::vector<Table>& tables,
                                    const QuestionInstance& q,
                                    const EssentialityProfile& profile,
                                    const std::vector<double>& thresholds,
                                    const ReasonConfig& config, std::optional<double> big_m) {
  ValidateQuestion(q);
  TableIlp model = BuildModel(tables, q, config.model);
  BuildCascadeExtension(model, profile, thresholds, big_m);
  AnswerResult r = AnswerModel(model, config);
  if (r.support) {
    const auto& levels = r.support->cascade_levels;
    r.cascade_stage = levels.empty() ? thresholds.size()
                                     : *std::min_element(levels.begin(), levels.end());
  }
  return r;
}

double AveragePrecision(const std::vector<ScoredTerm>& ranked) {
  std::vector<std::size_t> order(ranked.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ranked[a].score > ranked[b].score; });
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (!ranked[order[k]].label) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double PrAuc(const std::vector<ScoredTerm>& items) {
  std::size_t positives = 0;
  for (const ScoredTerm& t : items) positives += t.label;
  if (positives == 0) return 0.0;
  std::vector<ScoredTerm> sorted = items;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoredTerm& a, const ScoredTerm& b) { return a.score > b.score; });
  double area = 0.0, prev_r = 0.0, prev_p = 1.0;
  std::size_t tp = 0, taken = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    tp += sorted[i].label;
    ++taken;
    if (i + 1 < sorted.size() && sorted[i + 1].score == sorted[i].score) continue;
    const double r = static_cast<double>(tp) / static_cast<double>(positives);
    const double p = static_cast<double>(tp) / static_cast<double>(taken);
    area += (r - prev_r) * (p + prev_p) / 2.0;
    prev_r = r;
    prev_p = p;
  }
  return area;
}

EtMetrics ComputeEtMetrics(const std::vector<ScoredTerm>& items, double threshold) {
  EtMetrics m;
  m.terms = items.size();
  if (items.empty()) return m;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const ScoredTerm& t : items) {
    const bool pred = t.score > threshold;
    if (pred && t.label) ++tp;
    else if (pred) ++fp;
    else if (t.label) ++fn;
    else ++tn;
  }
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(items.size());
  m.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = m.precision + m.recall == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.auc = PrAuc(items);

  std::vector<std::string> order;
  std::map<std::string, std::vector<ScoredTerm>> groups;
  for (const ScoredTerm& t : items) {
    auto [it, inserted] = groups.emplace(t.question_id, std::vector<ScoredTerm>{});
    if (inserted) order.push_back(t.question_id);
    it->second.push_back(t);
  }
  double sum = 0.0;
  for (const std::string& id : order) {
    const auto& g = groups[id];
    if (std::none_of(g.begin(), g.end(), [](const ScoredTerm& t) { return t.label; })) continue;
    sum += AveragePrecision(g);
    ++m.questions;
  }
  m.map = m.questions == 0 ? 0.0 : sum / static_cast<double>(m.questions);
  return m;
}

std::string MetricsToJson(const EtMetrics& m) {
  Json j;
  j["auc"] = m.auc;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["map"] = m.map;
  j["terms"] = m.terms;
  j["questions"] = m.questions;
  return j.dump();
}

}  // namespace tabilp
