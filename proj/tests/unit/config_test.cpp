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


#include <string>

#include "doctest.h"
#include "tabilp/config.hpp"
#include "tabilp/error.hpp"

namespace tabilp {
namespace {

TEST_CASE("default config round-trips through json") {
  const RunConfig def;
  const std::string json = ConfigToJson(def);
  const RunConfig back = ParseConfig(json);
  CHECK(ConfigToJson(back) == json);
  CHECK(back.reason.model.alignment.min_cell_cell == 0.6);
  CHECK(back.reason.model.weights.header == 0.3);
  CHECK(back.reason.model.constants.qcons_coalign_max_dist == 4.0);
  CHECK(back.essential.scorer == "prop-lem");
  CHECK(!back.essential.xi);
  CHECK(back.seed == 0);
}

TEST_CASE("partial config overrides only the named keys") {
  const RunConfig c = ParseConfig(R"({
    "alignment": {"min_cell_cell": 0.7},
    "reason": {"time_limit_seconds": 5, "pricing": "bland"},
    "essential": {"xi": 0.4, "cascade": [0.4, 0.6], "scorer": "max-pmi"},
    "seed": 42
  })");
  CHECK(c.reason.model.alignment.min_cell_cell == 0.7);
  CHECK(c.reason.model.alignment.min_cell_qcons == 0.1);
  CHECK(c.reason.time_limit_seconds == 5.0);
  CHECK(c.reason.pricing == Pricing::kBland);
  CHECK(c.essential.xi == std::optional<double>(0.4));
  CHECK(c.essential.cascade == std::vector<double>{0.4, 0.6});
  CHECK(c.seed == 42);
  CHECK(ParseConfig(ConfigToJson(c)).seed == 42);
}

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS_AS(ParseConfig("[1, 2]"), Error);
  CHECK_THROWS_AS(ParseConfig("{not json"), Error);
  CHECK_THROWS_AS(ParseConfig(R"({"nonsense": {}})"), Error);
  CHECK_THROWS_AS(ParseConfig(R"({"alignment": {"min_cell_cell": 1.5}})"), Error);
  CHECK_THROWS_AS(ParseConfig(R"({"alignment": {"typo": 0.5}})"), Error);
  CHECK_THROWS_AS(ParseConfig(R"({"essential": {"xi": 2}})"), Error);
  CHECK_THROWS_AS(ParseConfig(R"({"essential": {"cascade": [0.8, 0.4]}})"), Error);
  CHECK_THROWS_AS(ParseConfig(R"({"essential": {"scorer": "magic"}})"), Error);
  CHECK_THROWS_AS(ParseConfig(R"({"reason": {"pricing": "steepest"}})"), Error);
  CHECK_THROWS_AS(ParseConfig(R"({"seed": -1})"), Error);
  try {
    ParseConfig("{not json");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
  try {
    ParseConfig(R"({"seed": "x"})");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
}

}  // namespace
}  // namespace tabilp
