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

#include <cmath>
#include <random>

#include "doctest.h"
#include "tabilp/lu.hpp"

namespace tabilp {
namespace {

// Random sparse nonsingular matrix: a permuted diagonal with extra entries,
// mixing unit columns the way slack columns appear in a basis.
std::vector<SparseColumn> RandomBasis(std::uint32_t seed, std::size_t m) {
  std::mt19937 rng(seed);
  std::vector<std::uint32_t> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> row(0, m - 1);
  std::vector<SparseColumn> cols(m);
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<double> dense(m, 0.0);
    dense[perm[s]] = 3.0 + std::abs(val(rng));
    if (rng() % 3 != 0) {
      const std::size_t extra = rng() % 4;
      for (std::size_t e = 0; e < extra; ++e) dense[row(rng)] += val(rng);
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (dense[r] != 0.0) cols[s].emplace_back(static_cast<std::uint32_t>(r), dense[r]);
    }
  }
  return cols;
}

std::vector<double> Multiply(const std::vector<SparseColumn>& cols, const std::vector<double>& x) {
  std::vector<double> out(cols.size(), 0.0);
  for (std::size_t s = 0; s < cols.size(); ++s) {
    for (const auto& [r, v] : cols[s]) out[r] += v * x[s];
  }
  return out;
}

std::vector<double> MultiplyTransposed(const std::vector<SparseColumn>& cols, const std::vector<double>& y) {
  std::vector<double> out(cols.size(), 0.0);
  for (std::size_t s = 0; s < cols.size(); ++s) {
    for (const auto& [r, v] : cols[s]) out[s] += v * y[r];
  }
  return out;
}

TEST_CASE("lu solves match matrix products on random sparse bases") {
  for (std::uint32_t seed = 1; seed <= 40; ++seed) {
    const std::size_t m = 5 + seed * 7;
    const auto cols = RandomBasis(seed, m);
    LuFactor lu;
    REQUIRE(lu.Factorize(cols));
    std::mt19937 rng(seed + 1000);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> b(m), c(m);
    for (auto& v : b) v = val(rng);
    for (auto& v : c) v = val(rng);

    std::vector<double> x = b;
    lu.Ftran(x);
    const auto bx = Multiply(cols, x);
    std::vector<double> y = c;
    lu.Btran(y);
    const auto cy = MultiplyTransposed(cols, y);
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(bx[i] == doctest::Approx(b[i]).epsilon(1e-9));
      CHECK(cy[i] == doctest::Approx(c[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("lu rejects singular matrices") {
  std::vector<SparseColumn> cols = {{{0, 1.0}, {1, 2.0}}, {{0, 2.0}, {1, 4.0}}};
  LuFactor lu;
  CHECK_FALSE(lu.Factorize(cols));
  std::vector<SparseColumn> empty_column = {{{0, 1.0}}, {}};
  CHECK_FALSE(lu.Factorize(empty_column));
}

TEST_CASE("lu of a signed identity") {
  std::vector<SparseColumn> cols = {{{1, -1.0}}, {{0, 1.0}}};
  LuFactor lu;
  REQUIRE(lu.Factorize(cols));
  std::vector<double> v = {3.0, 5.0};
  lu.Ftran(v);
  CHECK(v[0] == doctest::Approx(-5.0));
  CHECK(v[1] == doctest::Approx(3.0));
}

}  // namespace
}  // namespace tabilp
