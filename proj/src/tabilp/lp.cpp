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

#include "tabilp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>

#include "tabilp/error.hpp"
#include "tabilp/lu.hpp"

namespace tabilp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-7;
constexpr double kFactorTol = 1e-11;
constexpr double kDropTol = 1e-13;
constexpr double kPhase1Tol = 1e-7;
constexpr double kPrimalTol = 1e-9;
// Harris pass two accepts pivots down to this fraction of the largest.
constexpr double kHarrisRatio = 0.1;
// Pivots below this are confirmed against a fresh factorization.
constexpr double kSmallPivot = 1e-5;
// Consecutive degenerate pivots after which Dantzig pricing falls back to
// Bland's rule until progress resumes.
constexpr std::size_t kDegenerateStall = 50;
// Eta factors accumulated before the basis is refactored.
constexpr std::size_t kRefactorEvery = 100;

// Elementary column transform in basis-slot space: identity except column
// `row`, which holds `pivot` on the diagonal and `others` elsewhere.
struct Eta {
  std::uint32_t row = 0;
  double pivot = 1.0;
  std::vector<std::pair<std::uint32_t, double>> others;
};

// Revised simplex over bounded variables. The basis is held as a sparse LU
// factorization plus eta updates since the last refactorization. Variables: structural columns, one slack per row (column
// e_r) and, where the starting slack is out of bounds, an artificial
// (column sign * e_r).
class RevisedSimplex {
 public:
  // With `dual_start` every slack starts basic and each structural column
  // sits on the bound its cost prefers, which is dual feasible whenever
  // DualStartable(model) holds.
  RevisedSimplex(const LpModel& model, const LpOptions& options, bool dual_start)
      : options_(options), n_(model.num_columns()), m_(model.rows.size()), dual_start_(dual_start) {
    // Column-major copy of the constraint matrix.
    std::vector<std::size_t> count(n_, 0);
    for (const LpRow& row : model.rows) {
      for (const Term& t : row.terms) {
        if (t.coef != 0.0) ++count[t.var];
      }
    }
    col_start_.assign(n_ + 1, 0);
    for (std::size_t j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j];
    col_row_.resize(col_start_[n_]);
    col_val_.resize(col_start_[n_]);
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t r = 0; r < m_; ++r) {
      for (const Term& t : model.rows[r].terms) {
        if (t.coef == 0.0) continue;
        col_row_[fill[t.var]] = static_cast<std::uint32_t>(r);
        col_val_[fill[t.var]++] = t.coef;
      }
    }

    lo_ = model.lower;
    hi_ = model.upper;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!(lo_[j] <= hi_[j]) || !std::isfinite(lo_[j])) {
        ThrowInvalid("LP column " + std::to_string(j) + " has invalid bounds");
      }
    }
    value_ = lo_;
    if (dual_start_) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (model.objective[j] > 0.0) value_[j] = hi_[j];
      }
    }
    rhs_.resize(m_);
    std::vector<double> activity(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        activity[col_row_[p]] += col_val_[p] * value_[j];
      }
    }
    basic_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      const LpRow& row = model.rows[r];
      rhs_[r] = row.rhs;
      // a x + s = b with s >= 0 (<=), s <= 0 (>=), s = 0 (=).
      const double slo = row.sense == Sense::kGe ? -kInf : 0.0;
      const double shi = row.sense == Sense::kLe ? kInf : 0.0;
      lo_.push_back(slo);
      hi_.push_back(shi);
      const double s = row.rhs - activity[r];
      value_.push_back(std::clamp(s, slo, shi));
    }
    pos_.assign(n_ + m_, -1);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t slack = n_ + r;
      const double s = row_residual(r, activity);
      if (dual_start_ || std::abs(s) <= 0.0) {
        basic_[r] = static_cast<std::uint32_t>(slack);
        pos_[slack] = static_cast<std::int32_t>(r);
        continue;
      }
      const std::uint32_t art = static_cast<std::uint32_t>(lo_.size());
      lo_.push_back(0.0);
      hi_.push_back(kInf);
      value_.push_back(std::abs(s));
      art_row_.push_back(static_cast<std::uint32_t>(r));
      art_sign_.push_back(s > 0.0 ? 1.0 : -1.0);
      pos_.push_back(static_cast<std::int32_t>(r));
      basic_[r] = art;
    }
    cost_.assign(lo_.size(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) objective_.push_back(model.objective[j]);
    work_.assign(m_, 0.0);
    // Row-major copy of the structural part for pricing pivot rows.
    row_start_.assign(m_ + 1, 0);
    for (std::size_t p = 0; p < col_row_.size(); ++p) ++row_start_[col_row_[p] + 1];
    for (std::size_t r = 0; r < m_; ++r) row_start_[r + 1] += row_start_[r];
    row_col_.resize(col_row_.size());
    row_val_.resize(col_row_.size());
    std::vector<std::size_t> next(row_start_.begin(), row_start_.end() - 1);
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        row_col_[next[col_row_[p]]] = static_cast<std::uint32_t>(j);
        row_val_[next[col_row_[p]]++] = col_val_[p];
      }
    }
    Refactor();
  }

  // Cold solve. Returns nullopt only when a dual start stalls.
  std::optional<LpResult> Run() {
    LpResult result;
    if (dual_start_) {
      std::copy(objective_.begin(), objective_.end(), cost_.begin());
      ready_ = true;
      dse_.assign(num_vars(), 1.0);
      switch (DualOptimize()) {
        case DualOutcome::kDone: break;
        case DualOutcome::kInfeasible:
          result.status = LpResult::Status::kInfeasible;
          result.iterations = iterations_;
          return result;
        case DualOutcome::kLimit: return Limit(result);
        case DualOutcome::kStuck:
          ready_ = false;
          return std::nullopt;
      }
      if (!Optimize()) return Limit(result);
      MarkCurrent();
      return Optimal(result);
    }
    if (!art_row_.empty()) {
      std::fill(cost_.begin(), cost_.end(), 0.0);
      for (std::size_t a = 0; a < art_row_.size(); ++a) cost_[n_ + m_ + a] = -1.0;
      if (!Optimize()) return Limit(result);
      double infeasibility = 0.0;
      for (std::size_t a = 0; a < art_row_.size(); ++a) infeasibility += value_[n_ + m_ + a];
      if (infeasibility > kPhase1Tol) {
        result.status = LpResult::Status::kInfeasible;
        result.iterations = iterations_;
        return result;
      }
      for (std::size_t a = 0; a < art_row_.size(); ++a) {
        hi_[n_ + m_ + a] = 0.0;
        if (pos_[n_ + m_ + a] < 0) value_[n_ + m_ + a] = 0.0;
      }
    }
    std::fill(cost_.begin(), cost_.end(), 0.0);
    std::copy(objective_.begin(), objective_.end(), cost_.begin());
    ready_ = true;
    if (!Optimize()) return Limit(result);
    dse_.assign(num_vars(), 1.0);
    MarkCurrent();
    return Optimal(result);
  }

  // True once phase 1 succeeded, so bases from this instance can be reused.
  bool ready() const { return ready_; }

  void SetDeadline(std::optional<std::chrono::steady_clock::time_point> d) {
    options_.deadline = d;
  }

  void SetBounds(std::size_t j, double lo, double hi) {
    lo_[j] = lo;
    hi_[j] = hi;
  }

  LpBasis Basis() const {
    LpBasis b;
    b.stamp = current_ ? stamp_ : 0;
    b.basic = basic_;
    b.at_upper.assign(num_vars(), 0);
    for (std::size_t j = 0; j < num_vars(); ++j) {
      if (pos_[j] < 0 && value_[j] > lo_[j]) b.at_upper[j] = 1;
    }
    return b;
  }

  // Re-optimizes from `basis` under the current bounds: nonbasic variables
  // are placed on the bound that keeps their reduced cost dual feasible,
  // the dual simplex restores primal feasibility, then primal iterations
  // clean up. Returns nullopt when the basis cannot be used.
  std::optional<LpResult> Warm(const LpBasis& basis) {
    LpResult result;
    iterations_ = 0;
    if (!ready_ || basis.basic.size() != m_ || basis.at_upper.size() != num_vars()) {
      return std::nullopt;
    }
    if (current_ && basis.stamp == stamp_) {
      // Continue from the factorization in place; only nonbasic columns
      // whose bounds moved need new values.
      for (std::size_t j = 0; j < num_vars(); ++j) {
        if (pos_[j] < 0) value_[j] = std::clamp(value_[j], lo_[j], hi_[j]);
      }
    } else {
      basic_ = basis.basic;
      std::fill(pos_.begin(), pos_.end(), -1);
      for (std::size_t r = 0; r < m_; ++r) {
        if (pos_[basic_[r]] >= 0) return std::nullopt;
        pos_[basic_[r]] = static_cast<std::int32_t>(r);
      }
      for (std::size_t j = 0; j < num_vars(); ++j) {
        if (pos_[j] >= 0) continue;
        const bool upper = basis.at_upper[j] ? hi_[j] != kInf : lo_[j] == -kInf;
        value_[j] = upper ? hi_[j] : lo_[j];
      }
      current_ = false;
      if (!Factor()) return std::nullopt;
      dse_.assign(num_vars(), 1.0);
    }
    current_ = false;

    std::vector<double> y(m_);
    for (std::size_t r = 0; r < m_; ++r) y[r] = cost_[basic_[r]];
    Btran(y);
    for (std::size_t j = 0; j < num_vars(); ++j) {
      if (pos_[j] >= 0 || hi_[j] - lo_[j] <= 0.0) continue;
      const double d = ReducedCost(j, y);
      if (d > kDualTol && value_[j] < hi_[j]) {
        if (hi_[j] == kInf) return std::nullopt;
        value_[j] = hi_[j];
      } else if (d < -kDualTol && value_[j] > lo_[j]) {
        if (lo_[j] == -kInf) return std::nullopt;
        value_[j] = lo_[j];
      }
    }
    RecomputeBasics();

    switch (DualOptimize()) {
      case DualOutcome::kDone: break;
      case DualOutcome::kInfeasible:
        result.status = LpResult::Status::kInfeasible;
        result.iterations = iterations_;
        return result;
      case DualOutcome::kLimit: return Limit(result);
      case DualOutcome::kStuck: return std::nullopt;
    }
    if (!Optimize()) return Limit(result);
    MarkCurrent();
    return Optimal(result);
  }

 private:
  double row_residual(std::size_t r, const std::vector<double>& activity) const {
    const double s = rhs_[r] - activity[r];
    return s - std::clamp(s, lo_[n_ + r], hi_[n_ + r]);
  }

  void MarkCurrent() {
    current_ = true;
    stamp_ = ++next_stamp_;
  }

  LpResult& Optimal(LpResult& result) const {
    result.status = LpResult::Status::kOptimal;
    result.iterations = iterations_;
    result.x.assign(value_.begin(), value_.begin() + static_cast<long>(n_));
    result.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      result.x[j] = std::clamp(result.x[j], lo_[j], hi_[j]);
      result.objective += objective_[j] * result.x[j];
    }
    return result;
  }

  LpResult& Limit(LpResult& r) {
    r.status = LpResult::Status::kLimit;
    r.iterations = iterations_;
    return r;
  }

  std::size_t num_vars() const { return lo_.size(); }

  // Adds scale * column(var) to a dense vector.
  template <typename F>
  void ForColumn(std::size_t var, F&& f) const {
    if (var < n_) {
      for (std::size_t p = col_start_[var]; p < col_start_[var + 1]; ++p) f(col_row_[p], col_val_[p]);
    } else if (var < n_ + m_) {
      f(static_cast<std::uint32_t>(var - n_), 1.0);
    } else {
      const std::size_t a = var - n_ - m_;
      f(art_row_[a], art_sign_[a]);
    }
  }

  // B^{-1} v for a row-indexed v; the result is indexed by basis slot.
  void Ftran(std::vector<double>& v) const {
    lu_.Ftran(v);
    for (const Eta& e : etas_) {
      const double vr = v[e.row];
      if (vr == 0.0) continue;
      const double t = vr / e.pivot;
      v[e.row] = t;
      for (const auto& [i, a] : e.others) v[i] -= a * t;
    }
  }

  // y^T B^{-1} for a slot-indexed y; the result is indexed by row.
  void Btran(std::vector<double>& y) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = y[it->row];
      for (const auto& [i, a] : it->others) s -= a * y[i];
      y[it->row] = s / it->pivot;
    }
    lu_.Btran(y);
  }

  double ReducedCost(std::size_t j, const std::vector<double>& y) const {
    double d = cost_[j];
    ForColumn(j, [&](std::uint32_t r, double a) { d -= y[r] * a; });
    return d;
  }

  bool Movable(std::size_t j, double d) const {
    if (hi_[j] - lo_[j] <= 0.0) return false;
    return (d > kDualTol && value_[j] < hi_[j]) || (d < -kDualTol && value_[j] > lo_[j]);
  }

  void Refactor() {
    if (!Factor()) ThrowInternal("singular basis during refactorization");
  }

  // Factorizes the current basis and recomputes the basic values from the
  // nonbasic ones. False for a singular basis.
  bool Factor() {
    etas_.clear();
    std::vector<SparseColumn> columns(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      ForColumn(basic_[r], [&](std::uint32_t i, double a) { columns[r].emplace_back(i, a); });
    }
    if (!lu_.Factorize(columns)) return false;
    since_refactor_ = 0;
    RecomputeBasics();
    return true;
  }

  void RecomputeBasics() {
    std::vector<double> x(rhs_.begin(), rhs_.end());
    for (std::size_t j = 0; j < num_vars(); ++j) {
      if (pos_[j] >= 0 || value_[j] == 0.0) continue;
      const double vj = value_[j];
      ForColumn(j, [&](std::uint32_t r, double a) { x[r] -= a * vj; });
    }
    Ftran(x);
    for (std::size_t r = 0; r < m_; ++r) value_[basic_[r]] = x[r];
  }

  void PushEta(std::uint32_t row, const std::vector<double>& alpha) {
    Eta e;
    e.row = row;
    e.pivot = alpha[row];
    for (std::uint32_t i = 0; i < m_; ++i) {
      if (i != row && std::abs(alpha[i]) > kDropTol) e.others.emplace_back(i, alpha[i]);
    }
    etas_.push_back(std::move(e));
  }

  enum class DualOutcome { kDone, kInfeasible, kLimit, kStuck };

  // Dual simplex from a dual feasible basis. The leaving row maximizes the
  // squared bound violation over its dual steepest-edge weight. The ratio
  // test passes breakpoints of boxed columns by flipping them to their other
  // bound while the leaving row stays infeasible; ratio ties go to the larger
  // pivot, then the smaller index.
  DualOutcome DualOptimize() {
    const std::size_t cap = 20 * (m_ + num_vars());
    std::size_t done = 0;
    std::vector<double> rho(m_), tau(m_), flip(m_);
    std::vector<double> row_alpha(num_vars(), 0.0);
    std::vector<std::uint32_t> row_nz;
    struct Candidate {
      double ratio;
      double pivot;
      std::uint32_t var;
    };
    // Reduced costs are updated from the pivot row and rebuilt after each
    // refactorization.
    auto price_all = [&] {
      std::vector<double> y(m_);
      for (std::size_t i = 0; i < m_; ++i) y[i] = cost_[basic_[i]];
      Btran(y);
      d_.assign(num_vars(), 0.0);
      for (std::size_t j = 0; j < num_vars(); ++j) {
        if (pos_[j] < 0) d_[j] = ReducedCost(j, y);
      }
    };
    price_all();
    std::vector<Candidate> candidates;
    while (true) {
      if (iterations_ >= options_.max_iterations) return DualOutcome::kLimit;
      if (options_.deadline && (iterations_ & 31) == 0 &&
          std::chrono::steady_clock::now() > *options_.deadline) {
        return DualOutcome::kLimit;
      }
      if (done++ >= cap) return DualOutcome::kStuck;
      if (since_refactor_ >= kRefactorEvery) {
        if (!Factor()) return DualOutcome::kStuck;
        price_all();
      }

      std::optional<std::uint32_t> row;
      double best_score = 0.0;
      for (std::uint32_t r = 0; r < m_; ++r) {
        const std::uint32_t b = basic_[r];
        const double v = std::max(lo_[b] - value_[b], value_[b] - hi_[b]);
        if (v <= kPrimalTol) continue;
        const double score = v * v / dse_[b];
        if (score > best_score) {
          best_score = score;
          row = r;
        }
      }
      if (!row) return DualOutcome::kDone;
      const std::uint32_t r = *row;
      const std::uint32_t leaving = basic_[r];
      const bool raise = value_[leaving] < lo_[leaving];
      const double target = raise ? lo_[leaving] : hi_[leaving];

      std::fill(rho.begin(), rho.end(), 0.0);
      rho[r] = 1.0;
      Btran(rho);

      candidates.clear();
      for (std::uint32_t j : row_nz) row_alpha[j] = 0.0;
      row_nz.clear();
      auto touch = [&](std::uint32_t j, double v) {
        if (pos_[j] >= 0 || hi_[j] - lo_[j] <= 0.0) return;
        if (row_alpha[j] == 0.0) row_nz.push_back(j);
        row_alpha[j] += v;
        if (row_alpha[j] == 0.0) row_alpha[j] = 1e-300;  // keep it listed
      };
      for (std::uint32_t i = 0; i < m_; ++i) {
        const double ri = rho[i];
        if (ri == 0.0) continue;
        for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) touch(row_col_[p], ri * row_val_[p]);
        touch(static_cast<std::uint32_t>(n_ + i), ri);
      }
      std::sort(row_nz.begin(), row_nz.end());
      for (std::uint32_t j : row_nz) {
        const double a = row_alpha[j];
        if (std::abs(a) < kPivotTol) continue;
        const bool at_lower = value_[j] <= lo_[j];
        // x_r moves by -a per unit increase of x_j.
        const bool helps = raise ? (at_lower ? a < 0.0 : a > 0.0) : (at_lower ? a > 0.0 : a < 0.0);
        if (!helps) continue;
        candidates.push_back(Candidate{std::abs(d_[j]) / std::abs(a), std::abs(a), j});
      }
      std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        if (a.pivot != b.pivot) return a.pivot > b.pivot;
        return a.var < b.var;
      });
      double slope = std::abs(value_[leaving] - target);
      std::size_t k = 0;
      for (; k < candidates.size(); ++k) {
        const std::uint32_t j = candidates[k].var;
        const double range = hi_[j] - lo_[j];
        if (range == kInf || slope - candidates[k].pivot * range <= kPrimalTol) break;
        slope -= candidates[k].pivot * range;
      }
      if (k == candidates.size()) {
        return DualOutcome::kInfeasible;
      }
      // Prefer a larger pivot among entering ties.
      std::size_t pick = k;
      for (std::size_t t = k + 1; t < candidates.size() && candidates[t].ratio <= candidates[k].ratio + 1e-12; ++t) {
        if (candidates[t].pivot > candidates[pick].pivot) pick = t;
      }
      if (pick != k) std::swap(candidates[k], candidates[pick]);
      ++iterations_;
      const std::size_t q = candidates[k].var;

      if (k > 0) {
        std::fill(flip.begin(), flip.end(), 0.0);
        for (std::size_t t = 0; t < k; ++t) {
          const std::uint32_t j = candidates[t].var;
          const bool at_lower = value_[j] <= lo_[j];
          const double step = at_lower ? hi_[j] - lo_[j] : lo_[j] - hi_[j];
          value_[j] = at_lower ? hi_[j] : lo_[j];
          ForColumn(j, [&](std::uint32_t i, double v) { flip[i] += v * step; });
        }
        Ftran(flip);
        for (std::uint32_t i = 0; i < m_; ++i) {
          if (flip[i] != 0.0) value_[basic_[i]] -= flip[i];
        }
      }

      std::fill(work_.begin(), work_.end(), 0.0);
      ForColumn(q, [&](std::uint32_t i, double a) { work_[i] += a; });
      Ftran(work_);
      if (std::abs(work_[r]) < kFactorTol) return DualOutcome::kStuck;

      // Steepest-edge weights, keyed by basic variable.
      std::copy(rho.begin(), rho.end(), tau.begin());
      Ftran(tau);
      const double ar = work_[r];
      const double wr = std::max(dse_[leaving], 1e-12);
      for (std::uint32_t i = 0; i < m_; ++i) {
        if (i == r || work_[i] == 0.0) continue;
        const double ratio = work_[i] / ar;
        double& w = dse_[basic_[i]];
        w = std::max(w + ratio * (ratio * wr - 2.0 * tau[i]), 1e-4);
      }
      dse_[q] = std::max(wr / (ar * ar), 1e-4);

      const double theta = d_[q] / row_alpha[q];
      for (std::uint32_t j : row_nz) d_[j] -= theta * row_alpha[j];
      d_[q] = 0.0;
      d_[leaving] = -theta;

      const double delta = (value_[leaving] - target) / ar;
      for (std::uint32_t i = 0; i < m_; ++i) {
        if (work_[i] != 0.0) value_[basic_[i]] -= work_[i] * delta;
      }
      value_[q] += delta;
      value_[leaving] = target;
      PushEta(r, work_);
      ++since_refactor_;
      basic_[r] = static_cast<std::uint32_t>(q);
      pos_[q] = static_cast<std::int32_t>(r);
      pos_[leaving] = -1;
    }
  }

  // Returns false when an iteration or time limit stops the run.
  bool Optimize() {
    std::size_t degenerate_run = 0;
    std::vector<double> y(m_);
    while (true) {
      if (iterations_ >= options_.max_iterations) return false;
      if (options_.deadline && (iterations_ & 31) == 0 &&
          std::chrono::steady_clock::now() > *options_.deadline) {
        return false;
      }
      if (since_refactor_ >= kRefactorEvery) Refactor();

      for (std::size_t r = 0; r < m_; ++r) y[r] = cost_[basic_[r]];
      Btran(y);

      const bool bland = options_.pricing == Pricing::kBland ||
                         degenerate_run >= kDegenerateStall;
      std::optional<std::size_t> entering;
      double entering_d = 0.0;
      for (std::size_t j = 0; j < num_vars(); ++j) {
        if (pos_[j] >= 0) continue;
        const double d = ReducedCost(j, y);
        if (!Movable(j, d)) continue;
        if (bland) {
          entering = j;
          entering_d = d;
          break;
        }
        if (!entering || std::abs(d) > std::abs(entering_d)) {
          entering = j;
          entering_d = d;
        }
      }
      if (!entering) return true;
      ++iterations_;
      const std::size_t q = *entering;
      const double dir = entering_d > 0.0 ? 1.0 : -1.0;

      std::fill(work_.begin(), work_.end(), 0.0);
      ForColumn(q, [&](std::uint32_t r, double a) { work_[r] += a; });
      Ftran(work_);

      // Basic variable in row r moves by -alpha_r * dir per unit step.
      // Two-pass test: the first pass bounds the step, the second picks among
      // rows blocking within that bound, keeping only pivots near the largest
      // magnitude. Dantzig relaxes bounds by kPrimalTol (Harris); Bland uses
      // exact ratios so its anti-cycling tie rule still applies.
      auto limit_of = [&](std::uint32_t r, double slack, bool* to_upper) {
        const std::uint32_t b = basic_[r];
        const double rate = -work_[r] * dir;
        if (rate > 0.0) {
          *to_upper = true;
          return hi_[b] == kInf ? kInf : (hi_[b] - value_[b] + slack) / rate;
        }
        *to_upper = false;
        return lo_[b] == -kInf ? kInf : (value_[b] - lo_[b] + slack) / -rate;
      };
      double bound = kInf;
      for (std::uint32_t r = 0; r < m_; ++r) {
        if (std::abs(work_[r]) < kPivotTol) continue;
        bool up;
        bound = std::min(bound, limit_of(r, bland ? 0.0 : kPrimalTol, &up));
      }
      if (bland) bound += 1e-12;
      double max_alpha = 0.0;
      for (std::uint32_t r = 0; r < m_; ++r) {
        if (std::abs(work_[r]) < kPivotTol) continue;
        bool up;
        if (limit_of(r, 0.0, &up) <= bound) max_alpha = std::max(max_alpha, std::abs(work_[r]));
      }
      double step = hi_[q] - lo_[q];
      std::optional<std::uint32_t> leave_row;
      bool leave_at_upper = false;
      if (bound < step) {
        double chosen_alpha = 0.0;
        for (std::uint32_t r = 0; r < m_; ++r) {
          const double alpha = std::abs(work_[r]);
          if (alpha < kPivotTol || alpha < kHarrisRatio * max_alpha) continue;
          bool up;
          const double limit = limit_of(r, 0.0, &up);
          if (limit > bound) continue;
          // Bland keeps the smallest basic index; otherwise the largest pivot.
          const bool take = !leave_row ||
                            (bland ? basic_[r] < basic_[*leave_row] : alpha > chosen_alpha);
          if (take) {
            leave_row = r;
            leave_at_upper = up;
            chosen_alpha = alpha;
            step = std::max(limit, 0.0);
          }
        }
      }
      if (step == kInf) ThrowInternal("LP relaxation is unbounded");
      // A small pivot computed through update etas may be noise; recompute
      // it from a fresh factorization before trusting it.
      if (leave_row && since_refactor_ > 0 && std::abs(work_[*leave_row]) < kSmallPivot) {
        --iterations_;
        Refactor();
        continue;
      }
      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;

      if (step > 0.0) {
        for (std::uint32_t r = 0; r < m_; ++r) {
          if (work_[r] != 0.0) value_[basic_[r]] -= work_[r] * dir * step;
        }
        value_[q] += dir * step;
      }
      if (!leave_row) continue;  // bound flip

      const std::uint32_t r = *leave_row;
      const std::uint32_t leaving = basic_[r];
      value_[leaving] = leave_at_upper ? hi_[leaving] : lo_[leaving];
      PushEta(r, work_);
      ++since_refactor_;
      basic_[r] = static_cast<std::uint32_t>(q);
      pos_[q] = static_cast<std::int32_t>(r);
      pos_[leaving] = -1;
    }
  }

  LpOptions options_;
  std::size_t n_;
  std::size_t m_;
  std::vector<std::size_t> col_start_;
  std::vector<std::uint32_t> col_row_;
  std::vector<double> col_val_;
  std::vector<double> rhs_;
  std::vector<double> lo_, hi_, value_, cost_, objective_;
  std::vector<std::uint32_t> art_row_;
  std::vector<double> art_sign_;
  std::vector<std::uint32_t> basic_;
  std::vector<std::int32_t> pos_;
  LuFactor lu_;
  std::vector<Eta> etas_;  // updates since the last factorization
  std::vector<double> work_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> row_col_;
  std::vector<double> row_val_;
  std::vector<double> dse_;
  std::vector<double> d_;
  std::size_t since_refactor_ = 0;
  std::size_t iterations_ = 0;
  bool dual_start_ = false;
  bool ready_ = false;
  // The factorization and values match the last optimal solve, whose
  // snapshots carry `stamp_`.
  bool current_ = false;
  std::uint64_t stamp_ = 0;
  std::uint64_t next_stamp_ = 0;
};

bool DualStartable(const LpModel& model, const LpOptions& options) {
  if (options.algorithm != LpAlgorithm::kDual) return false;
  for (std::size_t j = 0; j < model.num_columns(); ++j) {
    if (model.objective[j] > 0.0 && !std::isfinite(model.upper[j])) return false;
  }
  return true;
}

}  // namespace

struct LpEngine::Impl {
  Impl(const LpModel& m, const LpOptions& o)
      : model(m), options(o), simplex(m, o, DualStartable(m, o)) {}
  LpModel model;
  LpOptions options;
  RevisedSimplex simplex;
};

LpEngine::LpEngine(const LpModel& model, const LpOptions& options)
    : impl_(std::make_unique<Impl>(model, options)) {}
LpEngine::~LpEngine() = default;

LpResult LpEngine::Solve() {
  if (std::optional<LpResult> r = impl_->simplex.Run()) return *r;
  return SolveLp(impl_->model, impl_->options);
}

void LpEngine::SetBounds(std::size_t column, double lower, double upper) {
  if (column >= impl_->model.num_columns()) ThrowInvalid("LP column out of range");
  impl_->model.lower[column] = lower;
  impl_->model.upper[column] = upper;
  impl_->simplex.SetBounds(column, lower, upper);
}

void LpEngine::SetDeadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
  impl_->options.deadline = deadline;
}

LpBasis LpEngine::Basis() const { return impl_->simplex.Basis(); }

LpResult LpEngine::Resolve(const LpBasis& basis, bool* warm) {
  impl_->simplex.SetDeadline(impl_->options.deadline);
  if (std::optional<LpResult> r = impl_->simplex.Warm(basis)) {
    if (warm) *warm = true;
    return *r;
  }
  if (warm) *warm = false;
  return SolveLp(impl_->model, impl_->options);
}

LpResult SolveLp(const LpModel& model, const LpOptions& options) {
  const std::size_t n = model.num_columns();
  if (model.lower.size() != n || model.upper.size() != n) {
    ThrowInvalid("LP bounds do not match the column count");
  }
  for (const LpRow& row : model.rows) {
    for (const Term& t : row.terms) {
      if (t.var >= n) ThrowInvalid("LP row references unknown column");
    }
  }
  if (DualStartable(model, options)) {
    RevisedSimplex dual(model, options, true);
    if (std::optional<LpResult> r = dual.Run()) return *r;
  }
  RevisedSimplex simplex(model, options, false);
  return *simplex.Run();
}

LpResult LpRelax(const IlpProblem& problem, const LpOptions& options) {
  problem.Validate();
  LpModel lp;
  const std::size_t n = problem.num_variables();
  lp.objective.resize(n);
  for (std::size_t j = 0; j < n; ++j) lp.objective[j] = problem.variable(static_cast<VarId>(j)).weight;
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, 1.0);
  for (const Constraint& c : problem.constraints()) {
    lp.rows.push_back(LpRow{c.terms, c.sense, c.rhs});
  }
  return SolveLp(lp, options);
}

}  // namespace tabilp
