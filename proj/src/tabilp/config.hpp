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

// Run configuration as JSON. Every section and key is optional; missing
// values keep their defaults and unknown keys are rejected.
//
//   {
//     "alignment":     {"min_cell_cell": 0.6, ..., "scorer": "lexical"},
//     "weights":       {"table": 1.0, ...},
//     "constants":     {"max_tables_to_chain": 4, ...},
//     "model_options": {"relation_matching": false, ...},
//     "reason":        {"tie_tolerance": 1e-6, "abstain_at_or_below": 0,
//                       "option_confidences": true, "time_limit_seconds": 60,
//                       "node_limit": 1000000, "pricing": "dantzig"},
//     "essential":     {"scorer": "prop-lem", "xi": 0.36,
//                       "cascade": [0.4, 0.6, 0.8, 1.0], "pmi_window": 3,
//                       "pmi_skip": 1},
//     "ir":            {"k1": 1.2, "b": 0.75},
//     "combiner":      {"learning_rate": 0.1, "epochs": 2000, "l2": 0.001},
//     "seed": 0
//   }

#ifndef TABILP_CONFIG_HPP
#define TABILP_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabilp/ensemble.hpp"
#include "tabilp/reason.hpp"

namespace tabilp {

struct EssentialConfig {
  std::string scorer = "prop-lem";
  std::optional<double> xi;
  std::vector<double> cascade;
  std::size_t pmi_window = 3;
  std::size_t pmi_skip = 1;

  void Validate() const;
};

struct RunConfig {
  ReasonConfig reason;
  EssentialConfig essential;
  IrConfig ir;
  CombinerConfig combiner;
  std::uint64_t seed = 0;

  void Validate() const;
};

RunConfig ParseConfig(std::string_view json);
RunConfig LoadConfig(const std::filesystem::path& path);
// Full configuration with every key present.
std::string ConfigToJson(const RunConfig& config);

}  // namespace tabilp

#endif  // TABILP_CONFIG_HPP
