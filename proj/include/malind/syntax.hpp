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

#ifndef MALIND_SYNTAX_HPP_
#define MALIND_SYNTAX_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace malind {

enum class EventKind {
  Import,
  Call,
  StringLiteral,
  ClassDef,
  TryHandler,
  TopLevelStmt,
  Assignment,
};

enum class Enclosing { ModuleTop, FunctionBody, ClassBody, HookRunMethod };

// Shallow model of one call argument or keyword value. Computed expressions
// keep their string fragments and identifiers so content rules can still
// inspect them; nothing is ever guessed beyond what the tokens show.
struct ArgValue {
  enum class Kind { StringLit, NumberLit, Computed };
  Kind kind = Kind::Computed;
  std::string text;       // source text, clipped
  std::string str_value;  // decoded value when StringLit
  double num_value = 0.0;
  std::vector<std::string> fragments;  // every string fragment inside
  std::vector<std::string> idents;     // identifiers inside
  std::vector<double> numbers;
  std::vector<std::string> str_list;  // elements when the value is a literal list/tuple of strings
  std::vector<std::pair<std::string, std::string>> dict_items;  // literal string key -> value text
  bool has_call = false;
};

// One normalized syntax event. Multiple events may share a line; nested calls
// yield one event per call, outer first.
struct SyntaxEvent {
  EventKind kind = EventKind::TopLevelStmt;
  int line_start = 1;
  int line_end = 1;
  Enclosing enclosing = Enclosing::ModuleTop;
  std::string text_excerpt;  // substring of the spanned lines, <= 200 chars

  // Call
  std::string callee_path;  // dotted, import-alias resolved
  std::string callee_raw;   // as written
  std::vector<ArgValue> args;
  std::map<std::string, ArgValue> kwargs;
  int parent_call = -1;    // index of the call this one is nested inside
  int receiver_call = -1;  // index of the call this one is chained onto
  std::string guard_text;  // enclosing if/while condition texts

  // StringLiteral
  std::string str_value;  // full decoded value; may exceed the excerpt cap
  bool str_is_bytes = false;
  bool str_is_fstring = false;
  std::size_t str_total_len = 0;

  // Assignment
  std::string target;
  std::vector<std::string> value_fragments;
  std::vector<std::string> value_idents;
  std::string value_call_path;  // first top-level call in the right-hand side
  bool value_is_literal = false;
  std::string value_literal;  // decoded value when value_is_literal

  // ClassDef
  std::string class_name;
  std::vector<std::string> bases;

  // Import
  std::string module_path;
  std::vector<std::string> imported_names;

  // TryHandler
  bool handler_is_broad = false;  // bare except, or except Exception/BaseException
  bool handler_pass_only = false;
  int guarded_start = 0;  // extent of the guarded try body
  int guarded_end = 0;
};

// Literal metadata of the package's setup invocation. Computed keyword values
// are never guessed; their names are recorded in computed_fields instead.
struct SetupManifest {
  bool present = false;
  std::optional<std::string> name;
  std::optional<std::string> author;
  std::optional<std::string> author_email;
  std::optional<std::string> description;
  std::vector<std::string> dependencies;  // normalized distribution names
  std::vector<std::pair<std::string, std::string>> cmdclass_hooks;  // hook -> class
  std::vector<std::string> computed_fields;
  int line_start = 0;
  int line_end = 0;
};

struct ParseOutcome {
  std::vector<SyntaxEvent> events;  // sorted by line_start, stable input order
  std::optional<SetupManifest> manifest;
  bool parse_degraded = false;
  std::vector<std::string> source_lines;  // sanitized input, split into lines
};

// Total over arbitrary input: structural extraction when the text tokenizes,
// a lexical token-pattern fallback otherwise. Never throws on malformed code.
ParseOutcome parse_source(std::string_view text, std::string_view rel_path);

// Captures the literal keyword arguments of the top-level setup() call.
// present = false when no such call exists.
SetupManifest extract_setup_manifest(const ParseOutcome& outcome);

std::string_view event_kind_name(EventKind k);

}  // namespace malind

#endif  // MALIND_SYNTAX_HPP_
