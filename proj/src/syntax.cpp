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

#include "malind/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>
#include <set>
#include <unordered_map>

#include "malind/util.hpp"
#include "python_lexer.hpp"

namespace malind {

namespace {

using pylex::Statement;
using pylex::TokKind;
using pylex::Token;

const std::set<std::string>& hook_base_names() {
  static const std::set<std::string> kSet = {
      "install",       "develop",          "build",     "build_py",
      "build_ext",     "build_scripts",    "sdist",     "egg_info",
      "bdist_egg",     "bdist_wheel",      "install_lib",
      "install_scripts", "install_egg_info", "test"};
  return kSet;
}

std::string last_component(const std::string& dotted) {
  auto pos = dotted.rfind('.');
  return pos == std::string::npos ? dotted : dotted.substr(pos + 1);
}

bool is_op(const Token& t, std::string_view text) {
  return t.kind == TokKind::Op && t.text == text;
}

bool is_kw(const Token& t, std::string_view text) {
  return t.kind == TokKind::Name && t.text == text;
}

struct Block {
  enum class Kind { Module, Class, Function, If, While, Try, Except, Other };
  Kind kind = Kind::Other;
  int indent = -1;
  std::string cond;          // If/While condition text
  std::string name;          // class/function name
  bool is_hook_class = false;
  bool is_hook_run = false;
  int event_index = -1;      // ClassDef or TryHandler event
  int body_start = 0;
  int body_end = 0;
  bool pass_only = true;     // Except bodies
  int try_body_start = 0;    // copied from the matching Try
  int try_body_end = 0;
};

class Extractor {
 public:
  explicit Extractor(ParseOutcome& out) : out_(out) {}

  void run(const std::vector<Statement>& stmts) {
    blocks_.push_back({Block::Kind::Module, -1});
    for (const auto& st : stmts) process(st);
    while (blocks_.size() > 1) pop_block();
    finalize_order();
  }

 private:
  ParseOutcome& out_;
  std::vector<Block> blocks_;
  std::unordered_map<std::string, std::string> aliases_;
  // Try blocks recently closed, by indent; except clauses attach to these.
  std::unordered_map<int, std::pair<int, int>> closed_try_;

  std::string excerpt(int line_start, int line_end) const {
    std::string joined;
    for (int ln = line_start; ln <= line_end; ++ln) {
      if (ln < 1 || ln > static_cast<int>(out_.source_lines.size())) break;
      if (!joined.empty()) joined += '\n';
      joined += out_.source_lines[static_cast<std::size_t>(ln - 1)];
    }
    return clip(trim(joined), 200);
  }

  Enclosing current_enclosing() const {
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
      if (it->kind == Block::Kind::Function) {
        return it->is_hook_run ? Enclosing::HookRunMethod : Enclosing::FunctionBody;
      }
      if (it->kind == Block::Kind::Class) return Enclosing::ClassBody;
    }
    return Enclosing::ModuleTop;
  }

  std::string guard_text(const std::string& own) const {
    std::string g;
    for (const auto& b : blocks_) {
      if ((b.kind == Block::Kind::If || b.kind == Block::Kind::While) && !b.cond.empty()) {
        if (!g.empty()) g += " && ";
        g += b.cond;
      }
    }
    if (!own.empty()) {
      if (!g.empty()) g += " && ";
      g += own;
    }
    return g;
  }

  std::string resolve(const std::string& path) const {
    auto dot = path.find('.');
    std::string head = dot == std::string::npos ? path : path.substr(0, dot);
    auto it = aliases_.find(head);
    if (it == aliases_.end()) return path;
    return dot == std::string::npos ? it->second : it->second + path.substr(dot);
  }

  int emit(SyntaxEvent ev) {
    out_.events.push_back(std::move(ev));
    return static_cast<int>(out_.events.size()) - 1;
  }

  SyntaxEvent base_event(EventKind kind, int line_start, int line_end, const std::string& own_guard) {
    SyntaxEvent ev;
    ev.kind = kind;
    ev.line_start = line_start;
    ev.line_end = std::max(line_start, line_end);
    ev.enclosing = current_enclosing();
    ev.guard_text = guard_text(own_guard);
    ev.text_excerpt = excerpt(ev.line_start, ev.line_end);
    return ev;
  }

  void pop_block() {
    Block b = blocks_.back();
    blocks_.pop_back();
    if (b.kind == Block::Kind::Try) {
      closed_try_[b.indent] = {b.body_start, b.body_end};
    } else if (b.kind == Block::Kind::Except && b.event_index >= 0) {
      auto& ev = out_.events[static_cast<std::size_t>(b.event_index)];
      ev.handler_pass_only = b.pass_only;
      ev.guarded_start = b.try_body_start;
      ev.guarded_end = b.try_body_end;
    } else if (b.kind == Block::Kind::Class && b.event_index >= 0) {
      auto& ev = out_.events[static_cast<std::size_t>(b.event_index)];
      if (b.body_end > ev.line_end) ev.line_end = b.body_end;
    }
  }

  void close_blocks_for(int indent) {
    while (blocks_.size() > 1 && blocks_.back().indent >= indent) pop_block();
  }

  void note_body(const Statement& st) {
    for (auto& b : blocks_) {
      if (&b == &blocks_.front()) continue;
      if (b.body_start == 0 && st.indent > b.indent) b.body_start = st.line_start;
      if (st.indent > b.indent) b.body_end = std::max(b.body_end, st.line_end);
    }
  }

  // --- expression scanning ------------------------------------------------

  // Collects a dotted name path starting at i; returns index one past it.
  static std::size_t read_path(const std::vector<Token>& toks, std::size_t i, std::size_t end,
                               std::string& path) {
    path = toks[i].text;
    std::size_t j = i + 1;
    while (j + 1 < end && is_op(toks[j], ".") && toks[j + 1].kind == TokKind::Name) {
      path += "." + toks[j + 1].text;
      j += 2;
    }
    return j;
  }

  void scan_fstring_exprs(const Token& str_tok, int parent) {
    for (const auto& expr : str_tok.fexprs) {
      auto sub = pylex::tokenize(expr);
      for (auto& st : sub.stmts) {
        for (auto& t : st.toks) {
          t.line = str_tok.line;
          t.end_line = str_tok.line;
        }
        scan_range(st.toks, 0, st.toks.size(), parent, "");
      }
    }
  }

  int emit_string(const Token& t, int parent, const std::string& own_guard) {
    SyntaxEvent ev = base_event(EventKind::StringLiteral, t.line, t.end_line, own_guard);
    ev.parent_call = parent;
    ev.str_value = t.value;
    ev.str_is_bytes = t.is_bytes;
    ev.str_is_fstring = t.is_fstring;
    ev.str_total_len = t.value.size();
    int idx = emit(std::move(ev));
    if (t.is_fstring) scan_fstring_exprs(t, parent);
    return idx;
  }

  void collect_tokens(const std::vector<Token>& toks, std::size_t b, std::size_t e, ArgValue& val) {
    for (std::size_t i = b; i < e; ++i) {
      const Token& t = toks[i];
      if (t.kind == TokKind::Str) {
        if (t.is_fstring) {
          for (const auto& f : t.fragments) {
            if (!f.empty()) val.fragments.push_back(f);
          }
        } else {
          val.fragments.push_back(t.value);
        }
      } else if (t.kind == TokKind::Name) {
        val.idents.push_back(t.text);
        if (i + 1 < e && is_op(toks[i + 1], "(")) val.has_call = true;
      } else if (t.kind == TokKind::Number) {
        val.numbers.push_back(t.num);
      }
    }
  }

  // True when [b,e) is a '[' or '(' bracketed run of string literals.
  bool parse_str_list(const std::vector<Token>& toks, std::size_t b, std::size_t e, ArgValue& val) {
    if (e - b < 2) return false;
    if (!(is_op(toks[b], "[") || is_op(toks[b], "("))) return false;
    std::vector<std::string> items;
    for (std::size_t i = b + 1; i + 1 < e; ++i) {
      const Token& t = toks[i];
      if (t.kind == TokKind::Str) {
        items.push_back(t.value);
      } else if (is_op(t, ",")) {
        continue;
      } else {
        return false;
      }
    }
    val.str_list = std::move(items);
    return true;
  }

  // Shallow dict of literal-string keys: {'install': CustomInstall, ...}.
  bool parse_dict_items(const std::vector<Token>& toks, std::size_t b, std::size_t e, ArgValue& val) {
    if (e - b < 2 || !is_op(toks[b], "{")) return false;
    std::size_t i = b + 1;
    while (i < e && !is_op(toks[i], "}")) {
      if (toks[i].kind != TokKind::Str) return false;
      std::string key = toks[i].value;
      ++i;
      if (i >= e || !is_op(toks[i], ":")) return false;
      ++i;
      std::string value_text;
      int depth = 0;
      while (i < e && !(depth == 0 && (is_op(toks[i], ",") || is_op(toks[i], "}")))) {
        if (is_op(toks[i], "(") || is_op(toks[i], "[") || is_op(toks[i], "{")) ++depth;
        if (is_op(toks[i], ")") || is_op(toks[i], "]") || is_op(toks[i], "}")) --depth;
        value_text += toks[i].text;
        ++i;
      }
      val.dict_items.emplace_back(std::move(key), std::move(value_text));
      if (i < e && is_op(toks[i], ",")) ++i;
    }
    return !val.dict_items.empty();
  }

  ArgValue analyze_value(const std::vector<Token>& toks, std::size_t b, std::size_t e, int call_idx,
                         const std::string& own_guard) {
    ArgValue val;
    std::string text;
    for (std::size_t i = b; i < e && text.size() < 220; ++i) {
      text += toks[i].text;
      if (i + 1 < e) text += ' ';
    }
    val.text = clip(text, 200);
    if (e - b == 1 && toks[b].kind == TokKind::Str) {
      val.kind = ArgValue::Kind::StringLit;
      val.str_value = toks[b].value;
    } else if (e - b == 1 && toks[b].kind == TokKind::Number) {
      val.kind = ArgValue::Kind::NumberLit;
      val.num_value = toks[b].num;
    } else {
      val.kind = ArgValue::Kind::Computed;
      parse_str_list(toks, b, e, val) || parse_dict_items(toks, b, e, val);
    }
    collect_tokens(toks, b, e, val);
    // Nested calls and literals inside the value become their own events.
    scan_range(toks, b, e, call_idx, own_guard);
    return val;
  }

  // Parses a call whose callee path occupies [name_b, open) and whose opening
  // parenthesis sits at open. Returns the index just past the closing paren.
  std::size_t parse_call(const std::vector<Token>& toks, std::size_t name_b, std::size_t open,
                         std::size_t end, int parent, int receiver, const std::string& own_guard) {
    std::string raw;
    if (receiver >= 0) {
      raw = toks[name_b].text;  // chained: only the method name
    } else {
      read_path(toks, name_b, open, raw);
    }
    // Find the matching close paren and top-level comma positions.
    int depth = 1;
    std::size_t close = end;
    std::vector<std::size_t> commas;
    for (std::size_t i = open + 1; i < end; ++i) {
      if (is_op(toks[i], "(") || is_op(toks[i], "[") || is_op(toks[i], "{")) ++depth;
      else if (is_op(toks[i], ")") || is_op(toks[i], "]") || is_op(toks[i], "}")) {
        --depth;
        if (depth == 0) {
          close = i;
          break;
        }
      } else if (depth == 1 && is_op(toks[i], ",")) {
        commas.push_back(i);
      }
    }

    SyntaxEvent ev = base_event(EventKind::Call, toks[name_b].line,
                                toks[close < end ? close : end - 1].end_line, own_guard);
    ev.callee_raw = raw;
    ev.callee_path = receiver >= 0 ? raw : resolve(raw);
    ev.parent_call = parent;
    ev.receiver_call = receiver;
    int idx = emit(std::move(ev));

    // Argument ranges between the parens.
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t arg_b = open + 1;
    for (std::size_t c : commas) {
      ranges.emplace_back(arg_b, c);
      arg_b = c + 1;
    }
    if (close > arg_b) ranges.emplace_back(arg_b, close);

    for (auto [rb, re] : ranges) {
      if (rb >= re) continue;
      if (re - rb >= 2 && toks[rb].kind == TokKind::Name && is_op(toks[rb + 1], "=")) {
        std::string key = toks[rb].text;
        ArgValue val = analyze_value(toks, rb + 2, re, idx, own_guard);
        out_.events[static_cast<std::size_t>(idx)].kwargs[key] = std::move(val);
      } else {
        ArgValue val = analyze_value(toks, rb, re, idx, own_guard);
        out_.events[static_cast<std::size_t>(idx)].args.push_back(std::move(val));
      }
    }

    std::size_t next = close < end ? close + 1 : end;
    // Chained method call on the result: foo(...).bar(...)
    if (next + 2 < end && is_op(toks[next], ".") && toks[next + 1].kind == TokKind::Name &&
        is_op(toks[next + 2], "(")) {
      return parse_call(toks, next + 1, next + 2, end, parent, idx, own_guard);
    }
    return next;
  }

  void scan_range(const std::vector<Token>& toks, std::size_t b, std::size_t e, int parent,
                  const std::string& own_guard) {
    std::size_t i = b;
    while (i < e) {
      const Token& t = toks[i];
      if (t.kind == TokKind::Name) {
        std::string path;
        std::size_t after = read_path(toks, i, e, path);
        if (after < e && is_op(toks[after], "(")) {
          i = parse_call(toks, i, after, e, parent, -1, own_guard);
          continue;
        }
        i = after;
        continue;
      }
      if (t.kind == TokKind::Str) {
        emit_string(t, parent, own_guard);
        ++i;
        continue;
      }
      ++i;
    }
  }

  // --- statement handling -------------------------------------------------

  static std::size_t colon_at_depth0(const std::vector<Token>& toks, std::size_t from) {
    int depth = 0;
    for (std::size_t i = from; i < toks.size(); ++i) {
      if (is_op(toks[i], "(") || is_op(toks[i], "[") || is_op(toks[i], "{")) ++depth;
      else if (is_op(toks[i], ")") || is_op(toks[i], "]") || is_op(toks[i], "}")) --depth;
      else if (depth == 0 && is_op(toks[i], ":")) return i;
    }
    return toks.size();
  }

  static std::string span_text(const std::vector<Token>& toks, std::size_t b, std::size_t e) {
    std::string s;
    for (std::size_t i = b; i < e; ++i) {
      s += toks[i].text;
      if (i + 1 < e) s += ' ';
    }
    return s;
  }

  void handle_import(const Statement& st) {
    const auto& toks = st.toks;
    std::size_t i = 1;
    while (i < toks.size()) {
      if (toks[i].kind != TokKind::Name) {
        ++i;
        continue;
      }
      std::string mod;
      i = read_path(toks, i, toks.size(), mod);
      std::string alias = mod.substr(0, mod.find('.'));
      if (i < toks.size() && is_kw(toks[i], "as") && i + 1 < toks.size() &&
          toks[i + 1].kind == TokKind::Name) {
        alias = toks[i + 1].text;
        aliases_[alias] = mod;
        i += 2;
      } else {
        // import a.b binds "a"; identity entries keep resolve() total.
        aliases_[alias] = alias;
      }
      SyntaxEvent ev = base_event(EventKind::Import, st.line_start, st.line_end, "");
      ev.module_path = mod;
      emit(std::move(ev));
      if (i < toks.size() && is_op(toks[i], ",")) ++i;
    }
  }

  void handle_from_import(const Statement& st) {
    const auto& toks = st.toks;
    std::size_t i = 1;
    std::string mod;
    while (i < toks.size() && is_op(toks[i], ".")) {
      mod += '.';
      ++i;
    }
    if (i < toks.size() && toks[i].kind == TokKind::Name && !is_kw(toks[i], "import")) {
      std::string rest;
      i = read_path(toks, i, toks.size(), rest);
      mod += rest;
    }
    if (i < toks.size() && is_kw(toks[i], "import")) ++i;
    SyntaxEvent ev = base_event(EventKind::Import, st.line_start, st.line_end, "");
    ev.module_path = mod;
    while (i < toks.size()) {
      if (toks[i].kind == TokKind::Name) {
        std::string name = toks[i].text;
        std::string alias = name;
        ++i;
        if (i + 1 < toks.size() && is_kw(toks[i], "as") && toks[i + 1].kind == TokKind::Name) {
          alias = toks[i + 1].text;
          i += 2;
        }
        ev.imported_names.push_back(name);
        if (name != "*" && !mod.empty() && mod[0] != '.') {
          aliases_[alias] = mod + "." + name;
        }
      } else {
        ++i;
      }
    }
    emit(std::move(ev));
  }

  void handle_class(const Statement& st) {
    const auto& toks = st.toks;
    if (toks.size() < 2 || toks[1].kind != TokKind::Name) return;
    SyntaxEvent ev = base_event(EventKind::ClassDef, st.line_start, st.line_end, "");
    ev.class_name = toks[1].text;
    std::size_t colon = colon_at_depth0(toks, 1);
    if (toks.size() > 2 && is_op(toks[2], "(")) {
      std::size_t i = 3;
      while (i < colon && !is_op(toks[i], ")")) {
        if (toks[i].kind == TokKind::Name) {
          std::string base;
          i = read_path(toks, i, colon, base);
          ev.bases.push_back(resolve(base));
        } else {
          ++i;
        }
      }
    }
    bool hook = false;
    for (const auto& b : ev.bases) {
      if (hook_base_names().count(last_component(b))) hook = true;
    }
    int idx = emit(std::move(ev));
    if (colon + 1 >= toks.size()) {
      Block blk;
      blk.kind = Block::Kind::Class;
      blk.indent = st.indent;
      blk.name = out_.events[static_cast<std::size_t>(idx)].class_name;
      blk.is_hook_class = hook;
      blk.event_index = idx;
      blk.body_end = st.line_end;
      blocks_.push_back(std::move(blk));
    }
  }

  void handle_def(const Statement& st) {
    const auto& toks = st.toks;
    if (toks.size() < 2 || toks[1].kind != TokKind::Name) return;
    std::string name = toks[1].text;
    bool in_hook_class = false;
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
      if (it->kind == Block::Kind::Function) break;
      if (it->kind == Block::Kind::Class) {
        in_hook_class = it->is_hook_class;
        break;
      }
    }
    std::size_t colon = colon_at_depth0(toks, 1);
    // Default-argument expressions may contain calls.
    scan_range(toks, 2, colon, -1, "");
    if (colon + 1 >= toks.size()) {
      Block blk;
      blk.kind = Block::Kind::Function;
      blk.indent = st.indent;
      blk.name = name;
      blk.is_hook_run = in_hook_class && name == "run";
      blocks_.push_back(std::move(blk));
    } else {
      // Inline suite: scan it in the function's enclosing context.
      Block blk;
      blk.kind = Block::Kind::Function;
      blk.indent = st.indent;
      blk.name = name;
      blk.is_hook_run = in_hook_class && name == "run";
      blocks_.push_back(std::move(blk));
      scan_range(toks, colon + 1, toks.size(), -1, "");
      blocks_.pop_back();
    }
  }

  void handle_if_while(const Statement& st, bool /*is_while*/) {
    const auto& toks = st.toks;
    std::size_t colon = colon_at_depth0(toks, 1);
    std::string cond = span_text(toks, 1, colon);
    scan_range(toks, 1, colon, -1, cond);
    if (colon + 1 < toks.size()) {
      // Inline suite: the guard applies to it but no block survives the line.
      scan_range(toks, colon + 1, toks.size(), -1, cond);
      maybe_assignment(st, colon + 1, cond);
      return;
    }
    Block blk;
    blk.kind = is_kw(toks[0], "while") ? Block::Kind::While : Block::Kind::If;
    blk.indent = st.indent;
    blk.cond = cond;
    blocks_.push_back(std::move(blk));
  }

  void handle_try(const Statement& st) {
    const auto& toks = st.toks;
    std::size_t colon = colon_at_depth0(toks, 0);
    if (colon + 1 < toks.size()) {
      scan_range(toks, colon + 1, toks.size(), -1, "");
      return;
    }
    Block blk;
    blk.kind = Block::Kind::Try;
    blk.indent = st.indent;
    blocks_.push_back(std::move(blk));
  }

  void handle_except(const Statement& st) {
    const auto& toks = st.toks;
    std::size_t colon = colon_at_depth0(toks, 0);
    bool broad = false;
    if (colon <= 1) {
      broad = true;  // bare except:
    } else {
      for (std::size_t i = 1; i < colon; ++i) {
        if (toks[i].kind == TokKind::Name &&
            (toks[i].text == "Exception" || toks[i].text == "BaseException")) {
          broad = true;
        }
      }
    }
    SyntaxEvent ev = base_event(EventKind::TryHandler, st.line_start, st.line_end, "");
    ev.handler_is_broad = broad;
    ev.handler_pass_only = false;
    auto closed = closed_try_.find(st.indent);
    int try_b = 0, try_e = 0;
    if (closed != closed_try_.end()) {
      try_b = closed->second.first;
      try_e = closed->second.second;
    }
    ev.guarded_start = try_b;
    ev.guarded_end = try_e;
    int idx = emit(std::move(ev));

    Block blk;
    blk.kind = Block::Kind::Except;
    blk.indent = st.indent;
    blk.event_index = idx;
    blk.try_body_start = try_b;
    blk.try_body_end = try_e;
    if (colon + 1 < toks.size()) {
      // Inline handler body, e.g. "except: pass".
      blk.pass_only = colon + 2 == toks.size() && is_kw(toks[colon + 1], "pass");
      auto& e = out_.events[static_cast<std::size_t>(idx)];
      e.handler_pass_only = blk.pass_only;
      scan_range(toks, colon + 1, toks.size(), -1, "");
      return;
    }
    blocks_.push_back(std::move(blk));
  }

  void maybe_assignment(const Statement& st, std::size_t from, const std::string& own_guard) {
    const auto& toks = st.toks;
    static const std::set<std::string> kAssignOps = {"=",  "+=", "-=", "*=", "/=",
                                                     "%=", "|=", "&=", "^="};
    int depth = 0;
    std::size_t eq = toks.size();
    for (std::size_t i = from; i < toks.size(); ++i) {
      if (is_op(toks[i], "(") || is_op(toks[i], "[") || is_op(toks[i], "{")) ++depth;
      else if (is_op(toks[i], ")") || is_op(toks[i], "]") || is_op(toks[i], "}")) --depth;
      else if (depth == 0 && toks[i].kind == TokKind::Op && kAssignOps.count(toks[i].text)) {
        eq = i;
        break;
      }
    }
    if (eq == toks.size() || eq == from) return;
    SyntaxEvent ev = base_event(EventKind::Assignment, st.line_start, st.line_end, own_guard);
    std::string target;
    for (std::size_t i = from; i < eq; ++i) target += toks[i].text;
    ev.target = clip(target, 200);
    std::size_t rhs_b = eq + 1;
    ArgValue tmp;
    collect_tokens(toks, rhs_b, toks.size(), tmp);
    ev.value_fragments = std::move(tmp.fragments);
    ev.value_idents = std::move(tmp.idents);
    if (toks.size() - rhs_b == 1 && toks[rhs_b].kind == TokKind::Str) {
      ev.value_is_literal = true;
      ev.value_literal = toks[rhs_b].value;
    }
    // First call in the right-hand side, if any.
    for (std::size_t i = rhs_b; i < toks.size(); ++i) {
      if (toks[i].kind == TokKind::Name) {
        std::string path;
        std::size_t after = read_path(toks, i, toks.size(), path);
        if (after < toks.size() && is_op(toks[after], "(")) {
          ev.value_call_path = resolve(path);
          break;
        }
        i = after - 1;
      }
    }
    emit(std::move(ev));
  }

  void process(const Statement& st) {
    // except/elif/else/finally close their sibling block but attach to its state.
    close_blocks_for(st.indent);
    note_body(st);

    if (st.toks.empty()) return;
    const Token& head = st.toks[0];

    // pass-only bookkeeping for enclosing except blocks
    if (!blocks_.empty()) {
      for (auto& b : blocks_) {
        if (b.kind == Block::Kind::Except && st.indent > b.indent && !is_kw(head, "pass")) {
          b.pass_only = false;
        }
      }
    }

    std::size_t before = out_.events.size();
    if (is_kw(head, "import")) {
      handle_import(st);
      return;
    }
    if (is_kw(head, "from")) {
      handle_from_import(st);
      return;
    }
    if (is_kw(head, "class")) {
      handle_class(st);
      return;
    }
    if (is_kw(head, "def")) {
      handle_def(st);
      return;
    }
    if (is_kw(head, "if") || is_kw(head, "elif") || is_kw(head, "while")) {
      handle_if_while(st, is_kw(head, "while"));
      return;
    }
    if (is_kw(head, "try")) {
      handle_try(st);
      return;
    }
    if (is_kw(head, "except")) {
      handle_except(st);
      return;
    }
    if (is_kw(head, "else") || is_kw(head, "finally")) {
      std::size_t colon = colon_at_depth0(st.toks, 0);
      if (colon + 1 < st.toks.size()) {
        scan_range(st.toks, colon + 1, st.toks.size(), -1, "");
        return;
      }
      Block blk;
      blk.kind = Block::Kind::Other;
      blk.indent = st.indent;
      blocks_.push_back(std::move(blk));
      return;
    }
    if (is_kw(head, "with") || is_kw(head, "for")) {
      std::size_t colon = colon_at_depth0(st.toks, 0);
      scan_range(st.toks, 1, colon, -1, "");
      if (colon + 1 < st.toks.size()) {
        scan_range(st.toks, colon + 1, st.toks.size(), -1, "");
        maybe_assignment(st, colon + 1, "");
        return;
      }
      Block blk;
      blk.kind = Block::Kind::Other;
      blk.indent = st.indent;
      blocks_.push_back(std::move(blk));
      return;
    }
    if (is_kw(head, "pass")) return;

    maybe_assignment(st, 0, "");
    scan_range(st.toks, 0, st.toks.size(), -1, "");
    if (out_.events.size() == before && current_enclosing() == Enclosing::ModuleTop) {
      emit(base_event(EventKind::TopLevelStmt, st.line_start, st.line_end, ""));
    }
  }

  // Events are emitted in pre-order, which is already non-decreasing in
  // line_start; the remap keeps parent/receiver links valid if an edge case
  // ever violates that.
  void finalize_order() {
    auto& evs = out_.events;
    std::vector<std::size_t> perm(evs.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return evs[a].line_start < evs[b].line_start;
    });
    std::vector<int> where(evs.size());
    for (std::size_t new_pos = 0; new_pos < perm.size(); ++new_pos) {
      where[perm[new_pos]] = static_cast<int>(new_pos);
    }
    std::vector<SyntaxEvent> sorted;
    sorted.reserve(evs.size());
    for (std::size_t p : perm) sorted.push_back(std::move(evs[p]));
    for (auto& ev : sorted) {
      if (ev.parent_call >= 0) ev.parent_call = where[static_cast<std::size_t>(ev.parent_call)];
      if (ev.receiver_call >= 0)
        ev.receiver_call = where[static_cast<std::size_t>(ev.receiver_call)];
    }
    evs = std::move(sorted);
  }
};

// --- lexical fallback -------------------------------------------------------

void lexical_fallback(ParseOutcome& out) {
  static const std::regex kImport(R"(^\s*import\s+([A-Za-z_][\w\.]*(?:\s*,\s*[A-Za-z_][\w\.]*)*))");
  static const std::regex kFrom(R"(^\s*from\s+([\w\.]+)\s+import\b)");
  static const std::regex kCall(R"(([A-Za-z_][\w\.]*)\s*\()");
  static const std::regex kStr(R"('([^']*)'|"([^"]*)")");

  for (std::size_t li = 0; li < out.source_lines.size(); ++li) {
    const std::string& line = out.source_lines[li];
    int ln = static_cast<int>(li) + 1;
    std::smatch m;
    std::vector<std::string> line_strings;
    for (auto it = std::sregex_iterator(line.begin(), line.end(), kStr);
         it != std::sregex_iterator(); ++it) {
      std::string v = (*it)[1].matched ? (*it)[1].str() : (*it)[2].str();
      line_strings.push_back(v);
      SyntaxEvent ev;
      ev.kind = EventKind::StringLiteral;
      ev.line_start = ev.line_end = ln;
      ev.str_value = v;
      ev.str_total_len = v.size();
      ev.text_excerpt = clip(trim(line), 200);
      out.events.push_back(std::move(ev));
    }
    if (std::regex_search(line, m, kImport)) {
      for (auto& mod : split(m[1].str(), ',')) {
        SyntaxEvent ev;
        ev.kind = EventKind::Import;
        ev.line_start = ev.line_end = ln;
        ev.module_path = trim(mod);
        ev.text_excerpt = clip(trim(line), 200);
        out.events.push_back(std::move(ev));
      }
    } else if (std::regex_search(line, m, kFrom)) {
      SyntaxEvent ev;
      ev.kind = EventKind::Import;
      ev.line_start = ev.line_end = ln;
      ev.module_path = m[1].str();
      ev.text_excerpt = clip(trim(line), 200);
      out.events.push_back(std::move(ev));
    }
    for (auto it = std::sregex_iterator(line.begin(), line.end(), kCall);
         it != std::sregex_iterator(); ++it) {
      SyntaxEvent ev;
      ev.kind = EventKind::Call;
      ev.line_start = ev.line_end = ln;
      ev.callee_raw = ev.callee_path = (*it)[1].str();
      ArgValue arg;
      arg.kind = ArgValue::Kind::Computed;
      arg.fragments = line_strings;
      ev.args.push_back(std::move(arg));
      ev.text_excerpt = clip(trim(line), 200);
      out.events.push_back(std::move(ev));
    }
  }
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const SyntaxEvent& a, const SyntaxEvent& b) {
                     return a.line_start < b.line_start;
                   });
}

std::string normalize_dependency(std::string_view raw) {
  std::string dep = to_lower(trim(raw));
  auto cut = dep.find_first_of(" <>=!~;[(,");
  if (cut != std::string::npos) dep = dep.substr(0, cut);
  return dep;
}

}  // namespace

std::string_view event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Import: return "Import";
    case EventKind::Call: return "Call";
    case EventKind::StringLiteral: return "StringLiteral";
    case EventKind::ClassDef: return "ClassDef";
    case EventKind::TryHandler: return "TryHandler";
    case EventKind::TopLevelStmt: return "TopLevelStmt";
    case EventKind::Assignment: return "Assignment";
  }
  return "?";
}

ParseOutcome parse_source(std::string_view text, std::string_view rel_path) {
  ParseOutcome out;
  std::string sanitized = sanitize_utf8(text);
  out.source_lines = split_lines(sanitized);

  (void)rel_path;
  auto lex = pylex::tokenize(sanitized);
  if (lex.had_error) {
    out.parse_degraded = true;
    lexical_fallback(out);
  } else {
    Extractor extractor(out);
    extractor.run(lex.stmts);
  }
  out.manifest = extract_setup_manifest(out);
  return out;
}

SetupManifest extract_setup_manifest(const ParseOutcome& outcome) {
  SetupManifest mf;
  const SyntaxEvent* setup = nullptr;
  for (const auto& ev : outcome.events) {
    if (ev.kind != EventKind::Call) continue;
    if (ev.enclosing != Enclosing::ModuleTop) continue;
    const std::string& p = ev.callee_path;
    if (p == "setup" || ends_with(p, ".setup")) {
      setup = &ev;
      break;
    }
  }
  if (!setup) return mf;
  mf.present = true;
  mf.line_start = setup->line_start;
  mf.line_end = setup->line_end;

  auto take_string = [&](const char* key, std::optional<std::string>& slot) {
    auto it = setup->kwargs.find(key);
    if (it == setup->kwargs.end()) return;
    if (it->second.kind == ArgValue::Kind::StringLit) {
      slot = it->second.str_value;
    } else {
      mf.computed_fields.push_back(key);
    }
  };
  take_string("name", mf.name);
  take_string("author", mf.author);
  take_string("author_email", mf.author_email);
  take_string("description", mf.description);

  for (const char* key : {"install_requires", "setup_requires", "requires"}) {
    auto it = setup->kwargs.find(key);
    if (it == setup->kwargs.end()) continue;
    if (!it->second.str_list.empty()) {
      for (const auto& dep : it->second.str_list) {
        std::string norm = normalize_dependency(dep);
        if (!norm.empty()) mf.dependencies.push_back(norm);
      }
    } else if (it->second.kind == ArgValue::Kind::Computed) {
      mf.computed_fields.push_back(key);
    }
  }

  auto cmd = setup->kwargs.find("cmdclass");
  if (cmd != setup->kwargs.end()) {
    if (!cmd->second.dict_items.empty()) {
      for (const auto& [hook, cls] : cmd->second.dict_items) {
        mf.cmdclass_hooks.emplace_back(hook, cls);
      }
    } else {
      mf.computed_fields.push_back("cmdclass");
    }
  }
  return mf;
}

}  // namespace malind
