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

#include "tabilp/text.hpp"

#include <algorithm>

namespace tabilp::text {
namespace {

bool IsWordByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Sorted so lookups can binary search.
constexpr std::string_view kStopwords[] = {
    "a",        "about",   "above",    "after",      "again",   "against",
    "all",      "am",      "an",       "and",        "any",     "are",
    "as",       "at",      "be",       "because",    "been",    "before",
    "being",    "below",   "between",  "both",       "but",     "by",
    "can",      "could",   "did",      "do",         "does",    "doing",
    "during",   "each",    "for",      "from",       "further", "had",
    "has",      "have",    "having",   "he",         "her",     "here",
    "hers",     "herself", "him",      "himself",    "his",     "how",
    "i",        "if",      "in",       "into",       "is",      "it",
    "its",      "itself",  "just",     "me",         "my",      "myself",
    "nor",      "of",      "on",       "once",       "or",      "other",
    "our",      "ours",    "ourselves", "own",       "same",    "she",
    "should",   "so",      "such",     "than",       "that",    "the",
    "their",    "theirs",  "them",     "themselves", "then",    "there",
    "these",    "they",    "this",     "those",      "through", "to",
    "too",      "until",   "very",     "was",        "we",      "were",
    "what",     "when",    "where",    "which",      "while",   "who",
    "whom",     "why",     "will",     "with",       "would",   "you",
    "your",     "yours",   "yourself", "yourselves",
};

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && IsSpace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && IsSpace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<Token> Tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && !IsWordByte(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && IsWordByte(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) {
      out.push_back(Token{ToLower(s.substr(start, i - start)), out.size()});
    }
  }
  return out;
}

const std::vector<std::string_view>& Stopwords() {
  static const std::vector<std::string_view> words(std::begin(kStopwords),
                                                   std::end(kStopwords));
  return words;
}

bool IsStopword(std::string_view lowered) {
  return std::binary_search(std::begin(kStopwords), std::end(kStopwords),
                            lowered);
}

std::string Stem(std::string_view w) {
  const std::size_t n = w.size();
  if (n > 5 && EndsWith(w, "ing")) return std::string(w.substr(0, n - 3));
  if (n > 4 && EndsWith(w, "ed")) return std::string(w.substr(0, n - 2));
  if (n > 4 && EndsWith(w, "es")) {
    std::string_view base = w.substr(0, n - 2);
    if (EndsWith(base, "s") || EndsWith(base, "x") || EndsWith(base, "z") ||
        EndsWith(base, "ch") || EndsWith(base, "sh")) {
      return std::string(base);
    }
  }
  if (n > 3 && EndsWith(w, "s") && !EndsWith(w, "ss")) {
    return std::string(w.substr(0, n - 1));
  }
  return std::string(w);
}

std::vector<Token> ContentTokens(std::string_view s) {
  std::vector<Token> all = Tokenize(s);
  std::vector<Token> out;
  out.reserve(all.size());
  for (Token& t : all) {
    if (!IsStopword(t.text)) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> ContentStems(std::string_view s) {
  std::vector<std::string> out;
  for (const Token& t : ContentTokens(s)) out.push_back(Stem(t.text));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tabilp::text
