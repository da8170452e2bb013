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

#ifndef MALIND_TAXONOMY_HPP_
#define MALIND_TAXONOMY_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace malind {

enum class Category {
  ExecutionStage,
  ExecutionMechanism,
  Exfiltration,
  SystemImpact,
  NetworkOperations,
  DefenseEvasion,
  MetadataManipulation,
};

// Where a rule runs: against code events, against the extracted setup
// manifest, or against the whole package.
enum class RuleScope { Statement, Manifest, PackageLevel };

struct IndicatorDef {
  std::string id;        // e.g. "EXM-008"
  std::string name;      // e.g. "Shell Command Execution"
  Category category = Category::ExecutionStage;
  // Occurrence count in the reference annotation corpus. Metadata only; the
  // detection rules never read it.
  int reference_count = 0;
  RuleScope scope = RuleScope::Statement;
  std::string rule;  // one-line description of the detection trigger
};

std::string_view category_name(Category c);
std::string_view category_prefix(Category c);  // EXS, EXM, ...
std::optional<Category> category_from_prefix(std::string_view prefix);
std::string_view scope_name(RuleScope s);

// Immutable registry of the 47 indicator definitions across 7 categories.
class Taxonomy {
 public:
  // The compiled-in registry.
  static const Taxonomy& builtin();

  // Loads a registry from the versioned JSON data file; throws on malformed
  // content or integrity violations (wrong count, duplicate ids).
  static Taxonomy load_file(const std::filesystem::path& path);

  const IndicatorDef* lookup(std::string_view id) const;
  // All definitions, or the category subset, sorted by id.
  std::vector<const IndicatorDef*> list(std::optional<Category> category = {}) const;
  const std::vector<IndicatorDef>& all() const { return defs_; }

  int version() const { return version_; }
  std::string to_json() const;      // the data-file form
  std::string catalog_text() const; // the generated human-readable catalog

 private:
  explicit Taxonomy(std::vector<IndicatorDef> defs, int version);
  void validate() const;

  std::vector<IndicatorDef> defs_;
  int version_ = 1;
};

}  // namespace malind

#endif  // MALIND_TAXONOMY_HPP_
