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


#include "tabilp/lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tabilp {
namespace {

constexpr double kPivotThreshold = 0.1;   // relative to the column maximum
constexpr double kSingularTol = 1e-11;
constexpr double kCancelTol = 1e-14;
constexpr std::size_t kMarkowitzColumns = 4;

const double* Find(const SparseColumn& row, std::uint32_t slot) {
  auto it = std::lower_bound(row.begin(), row.end(), slot,
                             [](const auto& e, std::uint32_t s) { return e.first < s; });
  return it != row.end() && it->first == slot ? &it->second : nullptr;
}

}  // namespace

bool LuFactor::Factorize(const std::vector<SparseColumn>& columns) {
  const std::size_t m = columns.size();
  pivot_row_.clear();
  pivot_col_.clear();
  pivot_val_.clear();
  lower_.clear();
  upper_.clear();

  std::vector<SparseColumn> rows(m);
  std::vector<std::vector<std::uint32_t>> col_rows(m);
  for (std::uint32_t s = 0; s < m; ++s) {
    for (const auto& [r, v] : columns[s]) {
      if (r >= m) return false;
      if (v == 0.0) continue;
      rows[r].emplace_back(s, v);
      col_rows[s].push_back(r);
    }
  }
  std::vector<std::size_t> col_count(m);
  for (std::size_t s = 0; s < m; ++s) col_count[s] = col_rows[s].size();
  std::vector<std::uint8_t> row_done(m, 0), col_done(m, 0);
  std::vector<std::uint32_t> col_single, row_single, remaining;
  for (std::uint32_t s = 0; s < m; ++s) {
    if (col_count[s] == 1) col_single.push_back(s);
    remaining.push_back(s);
  }
  for (std::uint32_t r = 0; r < m; ++r) {
    if (rows[r].size() == 1) row_single.push_back(r);
  }
  // Reversed so that the stacks pop in index order.
  std::reverse(col_single.begin(), col_single.end());
  std::reverse(row_single.begin(), row_single.end());

  // Active rows of column q with their entries.
  std::vector<std::pair<std::uint32_t, double>> entries;
  auto gather = [&](std::uint32_t q) {
    entries.clear();
    auto& list = col_rows[q];
    std::size_t keep = 0;
    for (std::uint32_t r : list) {
      if (row_done[r]) continue;
      const double* v = Find(rows[r], q);
      if (!v) continue;
      list[keep++] = r;
      entries.emplace_back(r, *v);
    }
    list.resize(keep);
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  entries.end());
  };

  SparseColumn merged;
  auto pivot = [&](std::uint32_t p, std::uint32_t q) -> bool {
    gather(q);
    const double* pv = Find(rows[p], q);
    if (!pv || std::abs(*pv) < kSingularTol) return false;
    const double val = *pv;
    SparseColumn lower;
    for (const auto& [k, akq] : entries) {
      if (k == p) continue;
      const double l = akq / val;
      lower.emplace_back(k, l);
      // row_k -= l * row_p, dropping column q.
      merged.clear();
      const SparseColumn& a = rows[k];
      const SparseColumn& b = rows[p];
      std::size_t i = 0, j = 0;
      while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
          merged.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
          if (b[j].first != q) {
            merged.emplace_back(b[j].first, -l * b[j].second);
            col_rows[b[j].first].push_back(k);
            ++col_count[b[j].first];
          }
          ++j;
        } else {
          const std::uint32_t s = a[i].first;
          if (s != q) {
            const double v = a[i].second - l * b[j].second;
            if (std::abs(v) > kCancelTol) {
              merged.emplace_back(s, v);
            } else {
              --col_count[s];
            }
          }
          ++i;
          ++j;
        }
      }
      rows[k].swap(merged);
      if (rows[k].size() == 1) row_single.push_back(k);
    }
    SparseColumn upper;
    for (const auto& [s, v] : rows[p]) {
      if (s == q) continue;
      upper.emplace_back(s, v);
      if (--col_count[s] == 1) col_single.push_back(s);
    }
    row_done[p] = 1;
    col_done[q] = 1;
    rows[p].clear();
    rows[p].shrink_to_fit();
    pivot_row_.push_back(p);
    pivot_col_.push_back(q);
    pivot_val_.push_back(val);
    lower_.push_back(std::move(lower));
    upper_.push_back(std::move(upper));
    return true;
  };

  while (pivot_row_.size() < m) {
    bool done = false;
    while (!done && !col_single.empty()) {
      const std::uint32_t q = col_single.back();
      col_single.pop_back();
      if (col_done[q] || col_count[q] != 1) continue;
      gather(q);
      if (entries.size() != 1) continue;
      if (!pivot(entries[0].first, q)) return false;
      done = true;
    }
    while (!done && !row_single.empty()) {
      const std::uint32_t p = row_single.back();
      row_single.pop_back();
      if (row_done[p] || rows[p].size() != 1) continue;
      const std::uint32_t q = rows[p][0].first;
      gather(q);
      double col_max = 0.0;
      for (const auto& e : entries) col_max = std::max(col_max, std::abs(e.second));
      if (std::abs(rows[p][0].second) < kPivotThreshold * col_max) continue;
      if (!pivot(p, q)) return false;
      done = true;
    }
    if (done) continue;

    // Markowitz search over the sparsest remaining columns.
    std::size_t keep = 0;
    for (std::uint32_t s : remaining) {
      if (!col_done[s]) remaining[keep++] = s;
    }
    remaining.resize(keep);
    if (remaining.empty()) return false;
    std::vector<std::uint32_t> order(remaining);
    std::partial_sort(order.begin(), order.begin() + std::min(kMarkowitzColumns, order.size()),
                      order.end(), [&](std::uint32_t a, std::uint32_t b) {
                        return col_count[a] != col_count[b] ? col_count[a] < col_count[b] : a < b;
                      });
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    std::uint32_t best_row = 0, best_col = 0;
    bool found = false;
    for (std::size_t c = 0; c < std::min(kMarkowitzColumns, order.size()); ++c) {
      const std::uint32_t q = order[c];
      gather(q);
      if (entries.empty()) return false;
      double col_max = 0.0;
      for (const auto& e : entries) col_max = std::max(col_max, std::abs(e.second));
      if (col_max < kSingularTol) return false;
      for (const auto& [r, v] : entries) {
        if (std::abs(v) < kPivotThreshold * col_max) continue;
        const std::size_t cost = (rows[r].size() - 1) * (entries.size() - 1);
        if (!found || cost < best_cost || (cost == best_cost && (r < best_row || (r == best_row && q < best_col)))) {
          found = true;
          best_cost = cost;
          best_row = r;
          best_col = q;
        }
      }
    }
    if (!found || !pivot(best_row, best_col)) return false;
  }
  work_.assign(m, 0.0);
  return true;
}

void LuFactor::Ftran(std::vector<double>& v) const {
  const std::size_t k_end = pivot_row_.size();
  for (std::size_t k = 0; k < k_end; ++k) {
    const double t = v[pivot_row_[k]];
    if (t == 0.0) continue;
    for (const auto& [i, l] : lower_[k]) v[i] -= l * t;
  }
  std::fill(work_.begin(), work_.end(), 0.0);
  for (std::size_t k = k_end; k-- > 0;) {
    double t = v[pivot_row_[k]];
    for (const auto& [j, u] : upper_[k]) t -= u * work_[j];
    work_[pivot_col_[k]] = t / pivot_val_[k];
  }
  v.swap(work_);
}

void LuFactor::Btran(std::vector<double>& z) const {
  const std::size_t k_end = pivot_row_.size();
  std::fill(work_.begin(), work_.end(), 0.0);
  for (std::size_t k = 0; k < k_end; ++k) {
    const double t = z[pivot_col_[k]] / pivot_val_[k];
    work_[pivot_row_[k]] = t;
    if (t == 0.0) continue;
    for (const auto& [j, u] : upper_[k]) z[j] -= u * t;
  }
  for (std::size_t k = k_end; k-- > 0;) {
    double t = work_[pivot_row_[k]];
    for (const auto& [i, l] : lower_[k]) t -= l * work_[i];
    work_[pivot_row_[k]] = t;
  }
  z.swap(work_);
}

std::size_t LuFactor::nonzeros() const {
  std::size_t n = pivot_row_.size();
  for (const auto& l : lower_) n += l.size();
  for (const auto& u : upper_) n += u.size();
  return n;
}

}  // namespace tabilp
