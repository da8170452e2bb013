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

#include "python_lexer.hpp"

#include <array>
#include <cctype>
#include <cstdlib>

namespace malind::pylex {

namespace {

bool is_name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

// Longest-first multi-character operators.
constexpr std::array<std::string_view, 26> kMultiOps = {
    "**=", "//=", ">>=", "<<=", "...", "!=", "==", "<=", ">=", "->", ":=", "+=", "-=",
    "*=",  "/=",  "%=",  "@=",  "&=",  "|=", "^=", "**", "//", ">>", "<<", "&&", "||"};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  int line = 1;
  LexResult result;

  // statement under construction
  std::vector<Token> toks;
  int stmt_indent = 0;
  int stmt_line_start = 1;
  int bracket_depth = 0;

  void error(const std::string& msg) {
    result.had_error = true;
    result.errors.push_back("line " + std::to_string(line) + ": " + msg);
  }

  char peek(std::size_t off = 0) const {
    return pos + off < src.size() ? src[pos + off] : '\0';
  }
  bool eof() const { return pos >= src.size(); }

  void flush_stmt(int end_line) {
    if (!toks.empty()) {
      Statement st;
      st.indent = stmt_indent;
      st.line_start = stmt_line_start;
      st.line_end = end_line;
      st.toks = std::move(toks);
      result.stmts.push_back(std::move(st));
      toks.clear();
    }
  }

  int measure_indent() {
    int indent = 0;
    while (!eof()) {
      char c = peek();
      if (c == ' ') {
        ++indent;
        ++pos;
      } else if (c == '\t') {
        indent += 8 - indent % 8;
        ++pos;
      } else {
        break;
      }
    }
    return indent;
  }

  void skip_comment() {
    while (!eof() && peek() != '\n') ++pos;
  }

  void push_token(Token t) {
    if (toks.empty()) stmt_line_start = t.line;
    toks.push_back(std::move(t));
  }

  // Decodes one escape sequence after the backslash; pos sits on the
  // character following '\\'.
  void decode_escape(std::string& out) {
    if (eof()) return;
    char c = src[pos++];
    switch (c) {
      case 'n': out += '\n'; return;
      case 't': out += '\t'; return;
      case 'r': out += '\r'; return;
      case 'a': out += '\a'; return;
      case 'b': out += '\b'; return;
      case 'f': out += '\f'; return;
      case 'v': out += '\v'; return;
      case '\\': out += '\\'; return;
      case '\'': out += '\''; return;
      case '"': out += '"'; return;
      case '0': case '1': case '2': case '3':
      case '4': case '5': case '6': case '7': {
        int v = c - '0';
        for (int i = 0; i < 2 && peek() >= '0' && peek() <= '7'; ++i) {
          v = v * 8 + (src[pos++] - '0');
        }
        out += static_cast<char>(v & 0xFF);
        return;
      }
      case 'x': {
        int v = 0;
        int digits = 0;
        while (digits < 2 && std::isxdigit(static_cast<unsigned char>(peek()))) {
          char h = src[pos++];
          v = v * 16 + (std::isdigit(static_cast<unsigned char>(h)) ? h - '0'
                                                                    : std::tolower(h) - 'a' + 10);
          ++digits;
        }
        if (digits == 0) {
          out += "\\x";
        } else {
          out += static_cast<char>(v & 0xFF);
        }
        return;
      }
      case 'u':
      case 'U': {
        int want = (c == 'u') ? 4 : 8;
        unsigned long v = 0;
        int digits = 0;
        while (digits < want && std::isxdigit(static_cast<unsigned char>(peek()))) {
          char h = src[pos++];
          v = v * 16 + static_cast<unsigned long>(
                           std::isdigit(static_cast<unsigned char>(h)) ? h - '0'
                                                                       : std::tolower(h) - 'a' + 10);
          ++digits;
        }
        if (digits != want || v > 0x10FFFF) {
          out += '?';
          return;
        }
        // UTF-8 encode.
        if (v < 0x80) {
          out += static_cast<char>(v);
        } else if (v < 0x800) {
          out += static_cast<char>(0xC0 | (v >> 6));
          out += static_cast<char>(0x80 | (v & 0x3F));
        } else if (v < 0x10000) {
          out += static_cast<char>(0xE0 | (v >> 12));
          out += static_cast<char>(0x80 | ((v >> 6) & 0x3F));
          out += static_cast<char>(0x80 | (v & 0x3F));
        } else {
          out += static_cast<char>(0xF0 | (v >> 18));
          out += static_cast<char>(0x80 | ((v >> 12) & 0x3F));
          out += static_cast<char>(0x80 | ((v >> 6) & 0x3F));
          out += static_cast<char>(0x80 | (v & 0x3F));
        }
        return;
      }
      case 'N': {
        // \N{NAME}: skip the name, substitute a placeholder.
        if (peek() == '{') {
          while (!eof() && peek() != '}') ++pos;
          if (!eof()) ++pos;
        }
        out += '?';
        return;
      }
      case '\n':
        ++line;  // escaped newline inside a string
        return;
      default:
        out += '\\';
        out += c;
        return;
    }
  }

  // Captures one f-string interpolation starting at '{' (already consumed).
  std::string capture_fexpr() {
    std::string expr;
    int depth = 1;
    while (!eof()) {
      char c = peek();
      if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
        if (depth == 0) {
          ++pos;
          break;
        }
      } else if (c == '\'' || c == '"') {
        // Nested string inside the expression: copy it opaquely.
        char q = c;
        expr += src[pos++];
        while (!eof() && peek() != q && peek() != '\n') {
          if (peek() == '\\') {
            expr += src[pos++];
            if (eof()) break;
          }
          expr += src[pos++];
        }
        if (!eof() && peek() == q) {
          expr += src[pos++];
        }
        continue;
      } else if (c == '\n') {
        ++line;
      }
      expr += src[pos++];
    }
    // !r / :format suffixes are not part of the expression.
    auto cut = expr.find_last_of("!:");
    if (cut != std::string::npos && cut > 0) {
      // only trim when it looks like a conversion/format tail
      bool balanced = true;
      int d = 0;
      for (std::size_t i = 0; i < cut; ++i) {
        if (expr[i] == '(' || expr[i] == '[' || expr[i] == '{') ++d;
        if (expr[i] == ')' || expr[i] == ']' || expr[i] == '}') --d;
      }
      balanced = (d == 0);
      if (balanced) expr = expr.substr(0, cut);
    }
    return expr;
  }

  void scan_string(bool raw, bool bytes, bool fstr, std::size_t token_start) {
    char quote = src[pos];
    bool triple = (peek(1) == quote && peek(2) == quote);
    pos += triple ? 3 : 1;

    Token t;
    t.kind = TokKind::Str;
    t.is_raw = raw;
    t.is_bytes = bytes;
    t.is_fstring = fstr;
    t.triple = triple;
    t.line = line;

    std::string fragment;
    bool terminated = false;
    while (!eof()) {
      char c = peek();
      // Interpolations are recognized before escape handling so raw f-strings
      // like rf"...\{call()}..." still yield their expressions.
      if (fstr && c == '{') {
        if (peek(1) == '{') {
          fragment += '{';
          pos += 2;
          continue;
        }
        ++pos;
        t.fragments.push_back(fragment);
        fragment.clear();
        t.fexprs.push_back(capture_fexpr());
        continue;
      }
      if (fstr && c == '}' && peek(1) == '}') {
        fragment += '}';
        pos += 2;
        continue;
      }
      if (c == '\\') {
        ++pos;
        if (raw) {
          fragment += '\\';
          if (!eof()) {
            if (peek() == '\n') ++line;
            fragment += src[pos++];
          }
        } else {
          decode_escape(fragment);
        }
        continue;
      }
      if (c == quote) {
        if (!triple) {
          ++pos;
          terminated = true;
          break;
        }
        if (peek(1) == quote && peek(2) == quote) {
          pos += 3;
          terminated = true;
          break;
        }
        fragment += src[pos++];
        continue;
      }
      if (c == '\n') {
        if (!triple) break;  // unterminated single-quoted string
        ++line;
        fragment += src[pos++];
        continue;
      }
      fragment += src[pos++];
    }
    if (!terminated) error("unterminated string literal");
    t.fragments.push_back(fragment);
    t.value.clear();
    for (const auto& f : t.fragments) t.value += f;
    t.end_line = line;
    t.text = std::string(src.substr(token_start, pos - token_start));
    push_token(std::move(t));
  }

  // Returns true when the characters at pos form a string prefix + quote.
  bool try_string_prefix() {
    std::size_t start = pos;
    std::size_t i = pos;
    bool raw = false, bytes = false, fstr = false;
    int nprefix = 0;
    while (i < src.size() && nprefix < 3) {
      char c = static_cast<char>(std::tolower(static_cast<unsigned char>(src[i])));
      if (c == 'r') {
        raw = true;
      } else if (c == 'b') {
        bytes = true;
      } else if (c == 'f') {
        fstr = true;
      } else if (c == 'u') {
        // no-op prefix
      } else {
        break;
      }
      ++i;
      ++nprefix;
    }
    if (i < src.size() && (src[i] == '\'' || src[i] == '"')) {
      pos = i;
      scan_string(raw, bytes, fstr, start);
      return true;
    }
    return false;
  }

  void scan_name() {
    std::size_t start = pos;
    while (!eof() && is_name_char(static_cast<unsigned char>(peek()))) ++pos;
    Token t;
    t.kind = TokKind::Name;
    t.text = std::string(src.substr(start, pos - start));
    t.line = t.end_line = line;
    push_token(std::move(t));
  }

  void scan_number() {
    std::size_t start = pos;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
        ++pos;
        continue;
      }
      if ((c == '+' || c == '-') && pos > start) {
        char prev = static_cast<char>(std::tolower(static_cast<unsigned char>(src[pos - 1])));
        if (prev == 'e') {
          ++pos;
          continue;
        }
      }
      break;
    }
    Token t;
    t.kind = TokKind::Number;
    t.text = std::string(src.substr(start, pos - start));
    t.num = std::strtod(t.text.c_str(), nullptr);
    t.line = t.end_line = line;
    push_token(std::move(t));
  }

  void scan_op() {
    for (std::string_view op : kMultiOps) {
      if (op.size() <= 1) continue;
      if (src.substr(pos, op.size()) == op) {
        Token t;
        t.kind = TokKind::Op;
        t.text = std::string(op);
        t.line = t.end_line = line;
        push_token(std::move(t));
        pos += op.size();
        return;
      }
    }
    char c = src[pos++];
    if (c == '(' || c == '[' || c == '{') ++bracket_depth;
    if (c == ')' || c == ']' || c == '}') {
      if (bracket_depth == 0) {
        error("unmatched closing bracket");
      } else {
        --bracket_depth;
      }
    }
    Token t;
    t.kind = TokKind::Op;
    t.text = std::string(1, c);
    t.line = t.end_line = line;
    push_token(std::move(t));
  }

  void run() {
    bool at_line_start = true;
    while (!eof()) {
      if (at_line_start) {
        int indent = measure_indent();
        if (eof()) break;
        if (peek() == '\n') {
          ++line;
          ++pos;
          continue;
        }
        if (peek() == '#') {
          skip_comment();
          continue;
        }
        if (peek() == '\r') {
          ++pos;
          continue;
        }
        if (toks.empty() && bracket_depth == 0) stmt_indent = indent;
        at_line_start = false;
        continue;
      }
      char c = peek();
      if (c == '\n') {
        ++pos;
        if (bracket_depth == 0) {
          flush_stmt(line);
          at_line_start = true;
        }
        ++line;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos;
        continue;
      }
      if (c == '#') {
        skip_comment();
        continue;
      }
      if (c == '\\' && peek(1) == '\n') {
        pos += 2;
        ++line;
        continue;
      }
      if (c == ';' && bracket_depth == 0) {
        ++pos;
        flush_stmt(line);
        continue;
      }
      if (c == '\'' || c == '"') {
        scan_string(false, false, false, pos);
        continue;
      }
      if (is_name_start(static_cast<unsigned char>(c))) {
        if (try_string_prefix()) continue;
        scan_name();
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        scan_number();
        continue;
      }
      scan_op();
    }
    if (bracket_depth > 0) error("unbalanced brackets at end of input");
    flush_stmt(line);
  }
};

}  // namespace

LexResult tokenize(std::string_view text) {
  Lexer lexer;
  lexer.src = text;
  lexer.run();
  return lexer.result;
}

}  // namespace malind::pylex
