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

// Fixed-format MPS export/import for 0/1 programs.
//
// Names are generated (X0000000 for columns, R0000000 for rows) to fit the
// 8-character name fields; the descriptive variable names and constraint tags
// travel in `* VAR` / `* ROW` comment lines so a round trip is lossless.
// Numbers are written in shortest round-trip form, which may overrun the
// 12-character value fields, so the reader splits on whitespace.

#ifndef TABILP_MPS_HPP
#define TABILP_MPS_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "tabilp/ilp.hpp"

namespace tabilp {

std::string ToMps(const IlpProblem& problem);
IlpProblem FromMps(std::string_view content);

void WriteMps(const IlpProblem& problem, const std::filesystem::path& path);
IlpProblem ReadMps(const std::filesystem::path& path);

}  // namespace tabilp

#endif  // TABILP_MPS_HPP
