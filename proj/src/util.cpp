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

#include "malind/util.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <unordered_set>

namespace malind {

namespace {

// Number of continuation bytes expected after a UTF-8 lead byte, or -1.
int utf8_expected_continuations(unsigned char b) {
  if (b < 0x80) return 0;
  if ((b & 0xE0) == 0xC0) return 1;
  if ((b & 0xF0) == 0xE0) return 2;
  if ((b & 0xF8) == 0xF0) return 3;
  return -1;
}

constexpr std::string_view kReplacement = "\xEF\xBF\xBD";  // U+FFFD

}  // namespace

std::string sanitize_utf8(std::string_view input) {
  std::string out;
  out.reserve(input.size());
  std::size_t i = 0;
  while (i < input.size()) {
    unsigned char lead = static_cast<unsigned char>(input[i]);
    int cont = utf8_expected_continuations(lead);
    if (cont < 0) {
      out += kReplacement;
      ++i;
      continue;
    }
    if (cont == 0) {
      out += static_cast<char>(lead);
      ++i;
      continue;
    }
    bool valid = i + static_cast<std::size_t>(cont) < input.size();
    if (valid) {
      for (int k = 1; k <= cont; ++k) {
        unsigned char c = static_cast<unsigned char>(input[i + k]);
        if ((c & 0xC0) != 0x80) {
          valid = false;
          break;
        }
      }
    }
    // Reject overlong encodings of ASCII and out-of-range lead bytes.
    if (valid && cont == 1 && lead < 0xC2) valid = false;
    if (valid && cont == 3 && lead > 0xF4) valid = false;
    if (!valid) {
      out += kReplacement;
      ++i;
      continue;
    }
    out.append(input.substr(i, 1 + cont));
    i += 1 + cont;
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  if (haystack.size() < needle.size()) return false;
  auto eq = [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
  };
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(), eq);
  return it != haystack.end();
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      std::size_t len = i - start;
      if (len > 0 && text[start + len - 1] == '\r') --len;
      lines.emplace_back(text.substr(start, len));
      start = i + 1;
    }
  }
  if (start < text.size()) {
    std::size_t len = text.size() - start;
    if (len > 0 && text[start + len - 1] == '\r') --len;
    lines.emplace_back(text.substr(start, len));
  }
  return lines;
}

std::size_t count_lines(std::string_view text) {
  if (text.empty()) return 0;
  std::size_t n = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  if (text.back() != '\n') ++n;
  return n;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string clip(std::string_view s, std::size_t max_len) {
  if (s.size() <= max_len) return std::string(s);
  std::size_t end = max_len;
  // Do not cut inside a multi-byte sequence.
  while (end > 0 && (static_cast<unsigned char>(s[end]) & 0xC0) == 0x80) --end;
  return std::string(s.substr(0, end));
}

std::size_t damerau_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

bool looks_like_base64_blob(std::string_view s, std::size_t min_len) {
  std::string stripped;
  stripped.reserve(s.size());
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    stripped += c;
  }
  if (stripped.size() < min_len) return false;
  if (stripped.size() % 4 != 0) return false;
  std::size_t pad = 0;
  while (pad < 2 && !stripped.empty() && stripped.back() == '=') {
    stripped.pop_back();
    ++pad;
  }
  std::size_t digits = 0;
  for (char c : stripped) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '+' || c == '/';
    if (!ok) return false;
    if (c >= '0' && c <= '9') ++digits;
  }
  // Plain prose is letters-only; real encoded payloads carry digits.
  return digits >= 2;
}

namespace {

// Frequent English letter bigrams; used to separate pronounceable text from
// keyboard-mash identifiers.
const std::unordered_set<std::string>& common_bigrams() {
  static const std::unordered_set<std::string> kSet = {
      "th", "he", "in", "er", "an", "re", "on", "at", "en", "nd", "ti", "es", "or", "te",
      "of", "ed", "is", "it", "al", "ar", "st", "to", "nt", "ng", "se", "ha", "as", "ou",
      "io", "le", "ve", "co", "me", "de", "hi", "ri", "ro", "ic", "ne", "ea", "ra", "ce",
      "li", "ch", "ll", "be", "ma", "si", "om", "ur", "ca", "el", "ta", "la", "ns", "di",
      "fo", "ho", "pe", "ec", "pr", "no", "ct", "us", "ac", "ot", "il", "tr", "ly", "nc",
      "et", "ut", "ss", "so", "rs", "un", "lo", "wa", "ge", "ie", "wh", "ee", "wi", "em",
      "ad", "ol", "rt", "po", "we", "na", "ul", "ni", "ts", "mo", "ow", "pa", "im", "mi",
      "ai", "sh", "ir", "su", "id", "os", "iv", "ia", "am", "fi", "ci", "vi", "pl", "ig",
      "tu", "ev", "ld", "ry", "mp", "fe", "bl", "ab", "gh", "ty", "op", "wo", "sa", "ay",
      "ex", "ke", "fr", "oo", "av", "ag", "if", "ap", "gr", "od", "bo", "sp", "rd", "do",
      "uc", "bu", "ei", "ov", "by", "rm", "ep", "tt", "oc", "fa", "ef", "cu", "rn", "sc",
      "gi", "da", "yo", "cr", "cl", "du", "ga", "qu", "ue", "ff", "ba", "ey", "ls", "va",
      "um", "pp", "ua", "up", "lu", "go", "ht", "ru", "ug", "ds", "lt", "pi", "rc", "rr",
      "eg", "au", "ck", "ew", "mu", "br", "bi", "pt", "ak", "pu", "ui", "rg", "ib", "tl",
      "ny", "ki", "rk", "ys", "ob", "mm", "fu", "ph", "og", "ms", "ye", "ys", "ub", "ip"};
  return kSet;
}

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

}  // namespace

double randomness_score(std::string_view s) {
  // Split into alphabetic words; everything else is a separator.
  std::vector<std::string> words;
  std::string cur;
  for (char c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      cur += c;
    } else if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(cur);

  std::size_t total_letters = 0;
  for (const auto& w : words) total_letters += w.size();
  if (total_letters < 4) return 0.0;

  std::size_t bigram_total = 0;
  std::size_t bigram_hits = 0;
  std::size_t case_transitions = 0;
  std::size_t case_positions = 0;
  std::size_t vowels = 0;
  std::size_t max_consonant_run = 0;
  for (const auto& w : words) {
    std::string lw = to_lower(w);
    std::size_t run = 0;
    for (std::size_t i = 0; i < lw.size(); ++i) {
      if (is_vowel(lw[i])) {
        ++vowels;
        run = 0;
      } else {
        ++run;
        max_consonant_run = std::max(max_consonant_run, run);
      }
      if (i + 1 < lw.size()) {
        ++bigram_total;
        std::string bg = lw.substr(i, 2);
        if (common_bigrams().count(bg)) ++bigram_hits;
      }
    }
    // Case flips past the leading character; capitalized words are normal.
    for (std::size_t i = 2; i < w.size(); ++i) {
      ++case_positions;
      bool prev_upper = std::isupper(static_cast<unsigned char>(w[i - 1])) != 0;
      bool cur_upper = std::isupper(static_cast<unsigned char>(w[i])) != 0;
      if (prev_upper != cur_upper) ++case_transitions;
    }
  }

  double bigram_hit_rate =
      bigram_total == 0 ? 0.0 : static_cast<double>(bigram_hits) / static_cast<double>(bigram_total);
  double chaos =
      case_positions == 0 ? 0.0
                          : static_cast<double>(case_transitions) / static_cast<double>(case_positions);
  double vowel_frac = static_cast<double>(vowels) / static_cast<double>(total_letters);
  double vowel_pen = 0.0;
  if (vowel_frac < 0.25) vowel_pen = (0.25 - vowel_frac) / 0.25;
  if (vowel_frac > 0.62) vowel_pen = std::min(1.0, (vowel_frac - 0.62) / 0.38);
  double run_pen = max_consonant_run >= 5 ? 1.0 : (max_consonant_run >= 4 ? 0.5 : 0.0);

  double score = 0.72 * (1.0 - bigram_hit_rate) + 0.14 * chaos + 0.08 * vowel_pen + 0.06 * run_pen;
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace malind
