// Copyright 2026 The malind Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MALIND_UTIL_HPP_
#define MALIND_UTIL_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace malind {

// Replaces invalid UTF-8 byte sequences with U+FFFD so downstream JSON
// serialization never sees malformed text.
std::string sanitize_utf8(std::string_view input);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);
bool contains_ci(std::string_view haystack, std::string_view needle);

std::vector<std::string> split(std::string_view s, char sep);
// Splits on newlines; a trailing partial line counts as one line.
std::vector<std::string> split_lines(std::string_view text);
std::size_t count_lines(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Truncates to at most max_len bytes without splitting a UTF-8 sequence.
std::string clip(std::string_view s, std::size_t max_len);

// Damerau-Levenshtein distance with adjacent transpositions.
std::size_t damerau_levenshtein(std::string_view a, std::string_view b);

// True when the string (whitespace removed) is plausibly a base64 payload:
// strict alphabet, valid padding, length divisible by four, and enough
// digits to rule out plain prose.
bool looks_like_base64_blob(std::string_view s, std::size_t min_len);

// Character-shape randomness score in [0,1]; gibberish identifiers score
// high, natural-language words score low. Strings with fewer than four
// letters score 0.
double randomness_score(std::string_view s);

}  // namespace malind

#endif  // MALIND_UTIL_HPP_
