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

#include "tabilp/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tabilp/error.hpp"
#include "tabilp/text.hpp"

namespace tabilp {
namespace {

using Json = nlohmann::ordered_json;

bool IsConstituentEdge(EdgeKind k) {
  return k == EdgeKind::kCellConstituent || k == EdgeKind::kHeaderConstituent ||
         k == EdgeKind::kTitleConstituent;
}

bool IsOptionEdge(EdgeKind k) {
  return k == EdgeKind::kCellOption || k == EdgeKind::kHeaderOption || k == EdgeKind::kTitleOption;
}

double Sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
double Softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

}  // namespace

IrIndex::IrIndex(const Corpus& corpus, const IrConfig& config) : config_(config) {
  if (!(config_.k1 >= 0.0) || !(config_.b >= 0.0 && config_.b <= 1.0)) {
    ThrowInvalid("BM25 needs k1 >= 0 and b in [0, 1]");
  }
  std::size_t total = 0;
  for (const auto& sentence : corpus.sentences()) {
    std::unordered_map<std::string, std::size_t> tf;
    std::size_t len = 0;
    for (const std::string& tok : sentence) {
      if (text::IsStopword(tok)) continue;
      ++tf[text::Stem(tok)];
      ++len;
    }
    std::vector<std::string> stems;
    for (const auto& [s, n] : tf) stems.push_back(s);
    std::sort(stems.begin(), stems.end());
    const auto id = static_cast<std::uint32_t>(docs_.size());
    for (const std::string& s : stems) postings_[s].push_back(id);
    docs_.push_back(std::move(stems));
    tf_.push_back(std::move(tf));
    length_.push_back(len);
    total += len;
  }
  avg_length_ = docs_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(docs_.size());
}

double IrIndex::Idf(std::string_view stem) const {
  auto it = postings_.find(std::string(stem));
  const double df = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
  const double n = static_cast<double>(docs_.size());
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

std::pair<std::optional<std::size_t>, double> IrIndex::Search(
    const QuestionInstance& q, std::size_t option, const std::vector<std::size_t>* terms) const {
  if (option >= q.options.size()) ThrowInvalid("option index out of range");
  std::vector<std::string> qs;
  if (terms) {
    std::set<std::string> acc;
    for (std::size_t l : *terms) {
      if (l >= q.constituents.size()) ThrowInvalid("constituent index out of range");
      for (std::string& s : text::ContentStems(q.constituents[l].text)) acc.insert(std::move(s));
    }
    qs.assign(acc.begin(), acc.end());
  } else {
    qs = text::ContentStems(q.text);
  }
  const std::vector<std::string> as = text::ContentStems(q.options[option]);
  std::vector<std::string> query;
  std::set_union(qs.begin(), qs.end(), as.begin(), as.end(), std::back_inserter(query));

  std::set<std::uint32_t> candidates;
  for (const std::string& s : as) {
    auto it = postings_.find(s);
    if (it != postings_.end()) candidates.insert(it->second.begin(), it->second.end());
  }
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::uint32_t d : candidates) {
    const auto& doc = docs_[d];
    const bool q_overlap = std::any_of(qs.begin(), qs.end(), [&](const std::string& s) {
      return std::binary_search(doc.begin(), doc.end(), s);
    });
    if (!q_overlap) continue;
    double score = 0.0;
    const double norm = config_.k1 * (1.0 - config_.b + config_.b * static_cast<double>(length_[d]) /
                                                            avg_length_);
    for (const std::string& s : query) {
      auto it = tf_[d].find(s);
      if (it == tf_[d].end()) continue;
      const double f = static_cast<double>(it->second);
      score += Idf(s) * f * (config_.k1 + 1.0) / (f + norm);
    }
    if (!best || score > best_score) {
      best = d;
      best_score = score;
    }
  }
  return {best, best_score};
}

double IrIndex::Score(const QuestionInstance& q, std::size_t option,
                      const std::vector<std::size_t>* terms) const {
  return Search(q, option, terms).second;
}

std::optional<std::size_t> IrIndex::Best(const QuestionInstance& q, std::size_t option,
                                         const std::vector<std::size_t>* terms) const {
  return Search(q, option, terms).first;
}

const std::array<std::string_view, kTableIlpFeatureCount>& TableIlpFeatureNames() {
  static const std::array<std::string_view, kTableIlpFeatureCount> kNames = {
      "avg_constituent_alignment", "min_constituent_alignment", "active_constituents",
      "active_constituent_fraction", "avg_option_alignment", "sum_option_alignment",
      "active_cells", "avg_edge_alignment", "min_edge_alignment", "log_variables",
      "log_constraints"};
  return kNames;
}

TableIlpFeatureVector TableIlpFeatures(const SupportGraph& g, std::size_t num_constituents,
                                       std::size_t num_variables, std::size_t num_constraints) {
  double q_sum = 0.0, q_min = 0.0, o_sum = 0.0, e_sum = 0.0, e_min = 0.0;
  std::size_t q_n = 0, o_n = 0;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const ScoredEdge& e = g.edges[i];
    e_min = i == 0 ? e.weight : std::min(e_min, e.weight);
    e_sum += e.weight;
    if (IsConstituentEdge(e.kind)) {
      q_min = q_n == 0 ? e.weight : std::min(q_min, e.weight);
      q_sum += e.weight;
      ++q_n;
    } else if (IsOptionEdge(e.kind)) {
      o_sum += e.weight;
      ++o_n;
    }
  }
  TableIlpFeatureVector f{};
  f[0] = q_n ? q_sum / static_cast<double>(q_n) : 0.0;
  f[1] = q_n ? q_min : 0.0;
  f[2] = static_cast<double>(g.constituents.size());
  f[3] = num_constituents ? static_cast<double>(g.constituents.size()) /
                                static_cast<double>(num_constituents)
                          : 0.0;
  f[4] = o_n ? o_sum / static_cast<double>(o_n) : 0.0;
  f[5] = o_sum;
  f[6] = static_cast<double>(g.cells.size());
  f[7] = g.edges.empty() ? 0.0 : e_sum / static_cast<double>(g.edges.size());
  f[8] = g.edges.empty() ? 0.0 : e_min;
  f[9] = num_variables ? std::log(static_cast<double>(num_variables)) : 0.0;
  f[10] = num_constraints ? std::log(static_cast<double>(num_constraints)) : 0.0;
  return f;
}

void SolverScorecard::Validate() const {
  if (num_options == 0) ThrowInvalid("scorecard '" + question_id + "' has no options");
  if (gold && *gold >= num_options) ThrowInvalid("scorecard '" + question_id + "' gold out of range");
  if (solvers.empty()) ThrowInvalid("scorecard '" + question_id + "' has no solvers");
  std::set<std::string> names;
  for (const SolverScores& s : solvers) {
    if (!names.insert(s.solver).second) ThrowInvalid("duplicate solver '" + s.solver + "'");
    if (s.scores.size() != num_options || s.missing.size() != num_options) {
      ThrowInvalid("solver '" + s.solver + "' must score every option of '" + question_id + "'");
    }
    for (double v : s.scores) {
      if (!std::isfinite(v)) ThrowInvalid("solver '" + s.solver + "' reported a non-finite score");
    }
  }
  if (!tableilp_support.empty() && tableilp_support.size() != num_options) {
    ThrowInvalid("scorecard '" + question_id + "' support features must cover every option");
  }
}

std::string ScorecardToJson(const SolverScorecard& card) {
  card.Validate();
  Json j;
  j["id"] = card.question_id;
  if (card.gold) j["gold"] = *card.gold;
  j["options"] = card.num_options;
  Json solvers = Json::object();
  for (const SolverScores& s : card.solvers) {
    Json arr = Json::array();
    for (std::size_t m = 0; m < s.scores.size(); ++m) {
      if (s.missing[m]) arr.push_back(nullptr);
      else arr.push_back(s.scores[m]);
    }
    solvers[s.solver] = std::move(arr);
  }
  j["solvers"] = std::move(solvers);
  if (!card.tableilp_support.empty()) {
    Json arr = Json::array();
    for (const auto& f : card.tableilp_support) {
      if (f) arr.push_back(*f);
      else arr.push_back(nullptr);
    }
    j["tableilp_support"] = std::move(arr);
  }
  return j.dump();
}

SolverScorecard ScorecardFromJson(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    ThrowParse(std::string("scorecard: ") + e.what());
  }
  try {
    SolverScorecard card;
    card.question_id = j.at("id").get<std::string>();
    if (j.contains("gold") && !j["gold"].is_null()) card.gold = j["gold"].get<std::size_t>();
    card.num_options = j.at("options").get<std::size_t>();
    for (const auto& [name, arr] : j.at("solvers").items()) {
      SolverScores s;
      s.solver = name;
      for (const Json& v : arr) {
        s.missing.push_back(v.is_null());
        s.scores.push_back(v.is_null() ? 0.0 : v.get<double>());
      }
      card.solvers.push_back(std::move(s));
    }
    if (j.contains("tableilp_support")) {
      for (const Json& v : j["tableilp_support"]) {
        if (v.is_null()) {
          card.tableilp_support.emplace_back(std::nullopt);
        } else {
          if (v.size() != kTableIlpFeatureCount) ThrowParse("scorecard: support features need 11 values");
          TableIlpFeatureVector f{};
          for (std::size_t i = 0; i < kTableIlpFeatureCount; ++i) f[i] = v[i].get<double>();
          card.tableilp_support.emplace_back(f);
        }
      }
    }
    card.Validate();
    return card;
  } catch (const nlohmann::json::exception& e) {
    ThrowParse(std::string("scorecard: ") + e.what());
  }
}

std::vector<SolverScorecard> ParseScorecards(std::string_view content) {
  std::vector<SolverScorecard> out;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    if (text::Trim(line).empty()) continue;
    out.push_back(ScorecardFromJson(line));
  }
  return out;
}

std::vector<SolverScorecard> LoadScorecards(const std::filesystem::path& path) {
  return ParseScorecards(ReadFile(path));
}

std::vector<OptionFeatures> SolverIndependentFeatures(const std::vector<double>& scores) {
  const std::size_t n = scores.size();
  std::vector<OptionFeatures> out(n);
  if (n == 0) return out;
  double sum = 0.0, max = -std::numeric_limits<double>::infinity();
  for (double s : scores) {
    sum += s;
    max = std::max(max, s);
  }
  double z = 0.0;
  for (double s : scores) z += std::exp(s - max);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].score = scores[i];
    out[i].normalized = sum == 0.0 ? 1.0 / static_cast<double>(n) : scores[i] / sum;
    out[i].softmax = std::exp(scores[i] - max) / z;
    out[i].best = scores[i] == max ? 1.0 : 0.0;
  }
  return out;
}

std::vector<std::string> FeatureNames(const SolverScorecard& card) {
  std::vector<std::string> names;
  for (const SolverScores& s : card.solvers) {
    for (const char* f : {"score", "normalized", "softmax", "best"}) names.push_back(s.solver + "." + f);
  }
  if (!card.tableilp_support.empty()) {
    for (std::string_view f : TableIlpFeatureNames()) names.push_back("support." + std::string(f));
  }
  return names;
}

std::vector<double> ExtractFeatures(const SolverScorecard& card, std::size_t option) {
  card.Validate();
  if (option >= card.num_options) ThrowInvalid("option index out of range");
  std::vector<double> x;
  for (const SolverScores& s : card.solvers) {
    const OptionFeatures f = SolverIndependentFeatures(s.scores)[option];
    x.insert(x.end(), {f.score, f.normalized, f.softmax, f.best});
  }
  if (!card.tableilp_support.empty()) {
    const auto& f = card.tableilp_support[option];
    for (std::size_t i = 0; i < kTableIlpFeatureCount; ++i) x.push_back(f ? (*f)[i] : 0.0);
  }
  return x;
}

void CombinerConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    ThrowInvalid("learning rate must be positive");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) ThrowInvalid("L2 strength must be >= 0");
}

void CombinerModel::Validate() const {
  const std::size_t n = features.size();
  if (weights.size() != n || mean.size() != n || scale.size() != n) {
    ThrowInvalid("combiner weights, mean and scale must match the feature count");
  }
  for (double s : scale) {
    if (!(s > 0.0)) ThrowInvalid("combiner scale entries must be positive");
  }
}

double CombinerModel::Linear(const std::vector<double>& x) const {
  if (x.size() != weights.size()) ThrowInvalid("feature vector length does not match the model");
  double t = bias;
  for (std::size_t i = 0; i < x.size(); ++i) t += weights[i] * (x[i] - mean[i]) / scale[i];
  return t;
}

double CombinerModel::Probability(const std::vector<double>& x) const { return Sigmoid(Linear(x)); }

CombinerModel TrainCombiner(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                            std::vector<std::string> features, const CombinerConfig& config,
                            std::vector<double>* loss_trace) {
  config.Validate();
  const std::size_t n = x.size();
  const std::size_t d = features.size();
  if (n == 0 || y.size() != n) ThrowInvalid("training needs one label per example");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != d) ThrowInvalid("training example has the wrong feature count");
    if (y[i] != 0 && y[i] != 1) ThrowInvalid("labels must be 0 or 1");
    pos += y[i];
  }
  if (pos == 0 || pos == n) ThrowInvalid("training needs at least one example of each class");

  CombinerModel m;
  m.features = std::move(features);
  m.config = config;
  m.weights.assign(d, 0.0);
  m.mean.assign(d, 0.0);
  m.scale.assign(d, 1.0);
  for (std::size_t k = 0; k < d; ++k) {
    double s = 0.0;
    for (const auto& row : x) s += row[k];
    m.mean[k] = s / static_cast<double>(n);
    double v = 0.0;
    for (const auto& row : x) v += (row[k] - m.mean[k]) * (row[k] - m.mean[k]);
    const double sd = std::sqrt(v / static_cast<double>(n));
    m.scale[k] = sd > 1e-12 ? sd : 1.0;
  }
  std::vector<std::vector<double>> z(n, std::vector<double>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) z[i][k] = (x[i][k] - m.mean[k]) / m.scale[k];
  }

  auto loss = [&]() {
    double l = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double t = m.bias;
      for (std::size_t k = 0; k < d; ++k) t += m.weights[k] * z[i][k];
      // -log sigmoid(t) for y = 1, -log(1 - sigmoid(t)) for y = 0.
      l += y[i] ? Softplus(-t) : Softplus(t);
    }
    double reg = 0.0;
    for (double w : m.weights) reg += w * w;
    return l / static_cast<double>(n) + 0.5 * config.l2 * reg;
  };

  if (loss_trace) loss_trace->assign(1, loss());
  std::vector<double> grad(d);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double t = m.bias;
      for (std::size_t k = 0; k < d; ++k) t += m.weights[k] * z[i][k];
      const double r = Sigmoid(t) - y[i];
      for (std::size_t k = 0; k < d; ++k) grad[k] += r * z[i][k];
      grad_b += r;
    }
    for (std::size_t k = 0; k < d; ++k) {
      m.weights[k] -= config.learning_rate *
                      (grad[k] / static_cast<double>(n) + config.l2 * m.weights[k]);
    }
    m.bias -= config.learning_rate * grad_b / static_cast<double>(n);
    if (loss_trace) loss_trace->push_back(loss());
  }
  return m;
}

TrainingSet BuildTrainingSet(const std::vector<SolverScorecard>& cards) {
  TrainingSet t;
  bool first = true;
  for (const SolverScorecard& c : cards) {
    if (!c.gold) continue;
    std::vector<std::string> names = FeatureNames(c);
    if (first) {
      t.features = std::move(names);
      first = false;
    } else if (names != t.features) {
      ThrowInvalid("scorecard '" + c.question_id + "' has a different solver or feature layout");
    }
    for (std::size_t m = 0; m < c.num_options; ++m) {
      t.x.push_back(ExtractFeatures(c, m));
      t.y.push_back(m == *c.gold ? 1 : 0);
    }
  }
  return t;
}

Combination Combine(const CombinerModel& model, const std::vector<std::vector<double>>& options) {
  model.Validate();
  if (options.empty()) ThrowInvalid("nothing to combine");
  Combination c;
  for (std::size_t m = 0; m < options.size(); ++m) {
    const double t = model.Linear(options[m]);
    c.linear.push_back(t);
    c.probabilities.push_back(Sigmoid(t));
    if (t > c.linear[c.chosen]) c.chosen = m;
  }
  return c;
}

Combination Combine(const CombinerModel& model, const SolverScorecard& card) {
  if (FeatureNames(card) != model.features) {
    ThrowInvalid("scorecard '" + card.question_id + "' does not match the combiner's features");
  }
  std::vector<std::vector<double>> x;
  for (std::size_t m = 0; m < card.num_options; ++m) x.push_back(ExtractFeatures(card, m));
  return Combine(model, x);
}

std::string CombinerToJson(const CombinerModel& model) {
  model.Validate();
  Json j;
  j["features"] = model.features;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["mean"] = model.mean;
  j["scale"] = model.scale;
  j["learning_rate"] = model.config.learning_rate;
  j["epochs"] = model.config.epochs;
  j["l2"] = model.config.l2;
  return j.dump(2) + "\n";
}

CombinerModel CombinerFromJson(std::string_view content) {
  try {
    const Json j = Json::parse(content);
    CombinerModel m;
    m.features = j.at("features").get<std::vector<std::string>>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.mean = j.at("mean").get<std::vector<double>>();
    m.scale = j.at("scale").get<std::vector<double>>();
    m.config.learning_rate = j.at("learning_rate").get<double>();
    m.config.epochs = j.at("epochs").get<std::size_t>();
    m.config.l2 = j.at("l2").get<double>();
    m.Validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    ThrowParse(std::string("combiner model: ") + e.what());
  }
}

}  // namespace tabilp
