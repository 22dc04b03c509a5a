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


// Sparse LU factorization of a square basis matrix for the simplex.
//
// Pivots are chosen by singletons first, then by Markowitz count among
// entries passing a relative threshold. Columns are basis slots and rows are
// constraint rows: Ftran maps a row-indexed right-hand side to slot values,
// Btran maps slot-indexed costs to row-indexed duals.

#ifndef TABILP_LU_HPP
#define TABILP_LU_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace tabilp {

using SparseColumn = std::vector<std::pair<std::uint32_t, double>>;

class LuFactor {
 public:
  // False when the matrix is numerically singular.
  bool Factorize(const std::vector<SparseColumn>& columns);

  // Solves B x = v in place: v enters indexed by row, leaves by slot.
  void Ftran(std::vector<double>& v) const;
  // Solves B^T y = z in place: z enters indexed by slot, leaves by row.
  void Btran(std::vector<double>& z) const;

  std::size_t size() const { return pivot_row_.size(); }
  std::size_t nonzeros() const;

 private:
  std::vector<std::uint32_t> pivot_row_;
  std::vector<std::uint32_t> pivot_col_;
  std::vector<double> pivot_val_;
  std::vector<SparseColumn> lower_;  // per pivot: (row, multiplier)
  std::vector<SparseColumn> upper_;  // per pivot: (slot, value), pivot excluded
  mutable std::vector<double> work_;
};

}  // namespace tabilp

#endif  // TABILP_LU_HPP
