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
//
// Tolerant tokenizer for the subject language. It groups tokens into logical
// statements (bracket- and backslash-continuation aware) and records the
// indentation of each statement; it never throws on malformed input, it only
// flags errors so the caller can fall back to lexical extraction.

#ifndef MALIND_PYTHON_LEXER_HPP_
#define MALIND_PYTHON_LEXER_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace malind::pylex {

enum class TokKind { Name, Number, Str, Op };

struct Token {
  TokKind kind = TokKind::Op;
  std::string text;   // raw source slice (strings keep prefix and quotes)
  std::string value;  // decoded value for strings; literal fragments joined for f-strings
  double num = 0.0;   // parsed value for numbers
  bool is_fstring = false;
  bool is_bytes = false;
  bool is_raw = false;
  bool triple = false;
  int line = 1;
  int end_line = 1;
  std::vector<std::string> fragments;  // f-string literal pieces (single piece otherwise)
  std::vector<std::string> fexprs;     // f-string interpolation expressions
};

struct Statement {
  int indent = 0;
  int line_start = 1;
  int line_end = 1;
  std::vector<Token> toks;
};

struct LexResult {
  std::vector<Statement> stmts;
  bool had_error = false;
  std::vector<std::string> errors;
};

LexResult tokenize(std::string_view text);

}  // namespace malind::pylex

#endif  // MALIND_PYTHON_LEXER_HPP_
