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

// Token pipeline shared by the knowledge loaders, the aligner and the
// corpus-based scorers: lowercase, split, drop stopwords, strip suffixes.

#ifndef TABILP_TEXT_HPP
#define TABILP_TEXT_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tabilp::text {

struct Token {
  std::string text;
  std::size_t position = 0;  // index among all raw tokens of the source
};

std::string ToLower(std::string_view s);
std::string Trim(std::string_view s);

// Splits on anything that is not an ASCII letter/digit. Bytes >= 0x80 are kept
// inside tokens so UTF-8 words survive intact. Output is lowercased.
std::vector<Token> Tokenize(std::string_view s);

bool IsStopword(std::string_view lowered);
const std::vector<std::string_view>& Stopwords();

// Light suffix stripping: -ing, -ed, -es (after a sibilant), -s.
std::string Stem(std::string_view lowered);

// Lowercased non-stopword tokens, positions preserved.
std::vector<Token> ContentTokens(std::string_view s);

// Sorted, de-duplicated stems of the content tokens.
std::vector<std::string> ContentStems(std::string_view s);

}  // namespace tabilp::text

#endif  // TABILP_TEXT_HPP
