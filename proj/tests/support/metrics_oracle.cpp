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


#include "metrics_oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

namespace tabilp::testing {

namespace {

// 1-based rank of item i: everything scored higher, plus equal scores that
// come first.
std::size_t Rank(const std::vector<ScoredTerm>& items, std::size_t i) {
  std::size_t r = 1;
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (items[j].score > items[i].score || (items[j].score == items[i].score && j < i)) ++r;
  }
  return r;
}

}  // namespace

double OracleAveragePrecision(const std::vector<ScoredTerm>& items) {
  std::vector<std::size_t> ranks;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].label) ranks.push_back(Rank(items, i));
  }
  if (ranks.empty()) return 0.0;
  std::sort(ranks.begin(), ranks.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    // k + 1 positives sit at or above this rank.
    sum += double(k + 1) / double(ranks[k]);
  }
  return sum / double(ranks.size());
}

double OraclePrAuc(const std::vector<ScoredTerm>& items) {
  std::size_t positives = 0;
  std::set<double, std::greater<>> cuts;
  for (const ScoredTerm& t : items) {
    positives += t.label;
    cuts.insert(t.score);
  }
  if (positives == 0) return 0.0;
  double area = 0.0, r0 = 0.0, p0 = 1.0;
  for (double cut : cuts) {
    std::size_t tp = 0, predicted = 0;
    for (const ScoredTerm& t : items) {
      if (t.score >= cut) {
        ++predicted;
        tp += t.label;
      }
    }
    const double r = double(tp) / double(positives);
    const double p = double(tp) / double(predicted);
    area += (r - r0) * (p + p0) / 2.0;
    r0 = r;
    p0 = p;
  }
  return area;
}

EtMetrics OracleMetrics(const std::vector<ScoredTerm>& items, double threshold) {
  EtMetrics m;
  m.terms = items.size();
  if (items.empty()) return m;
  double tp = 0, fp = 0, fn = 0, correct = 0;
  for (const ScoredTerm& t : items) {
    const bool pred = t.score > threshold;
    tp += pred && t.label;
    fp += pred && !t.label;
    fn += !pred && t.label;
    correct += pred == t.label;
  }
  m.accuracy = correct / double(items.size());
  m.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.auc = OraclePrAuc(items);

  std::vector<std::string> ids;
  for (const ScoredTerm& t : items) {
    if (std::find(ids.begin(), ids.end(), t.question_id) == ids.end()) ids.push_back(t.question_id);
  }
  double sum = 0.0;
  for (const std::string& id : ids) {
    std::vector<ScoredTerm> group;
    bool any = false;
    for (const ScoredTerm& t : items) {
      if (t.question_id != id) continue;
      group.push_back(t);
      any |= t.label;
    }
    if (!any) continue;
    sum += OracleAveragePrecision(group);
    ++m.questions;
  }
  m.map = m.questions > 0 ? sum / double(m.questions) : 0.0;
  return m;
}

std::vector<ScoredTerm> RandomScoredTerms(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t questions = 1 + rng() % 5;
  const std::size_t n = 1 + rng() % 30;
  std::vector<ScoredTerm> out;
  for (std::size_t i = 0; i < n; ++i) {
    ScoredTerm t;
    t.question_id = "q" + std::to_string(rng() % questions);
    t.score = double(rng() % 11) / 10.0;
    t.label = rng() % 2 == 0;
    out.push_back(t);
  }
  return out;
}

}  // namespace tabilp::testing
