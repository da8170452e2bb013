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

#ifndef MALIND_CORPUS_HPP_
#define MALIND_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace malind {

// One analyzable source file inside a package. rel_path is '/'-separated and
// relative to the package root; rank is the execution-flow position assigned
// by order_files.
struct SourceFile {
  std::string rel_path;
  int rank = -1;
  std::uint64_t byte_len = 0;
  std::size_t line_count = 0;
};

struct PackageSource {
  std::string package_id;
  std::filesystem::path root;
  std::vector<SourceFile> files;
  // Regular files that are not subject-language sources; cataloged for
  // reporting but never ranked or scanned.
  std::vector<std::string> unranked_files;
};

// Non-fatal events collected while walking a corpus (unreadable or oversized
// files, skipped symlinks).
struct RunLog {
  std::vector<std::string> warnings;
  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

struct DiscoverOptions {
  std::uint64_t max_file_bytes = 5 * 1024 * 1024;
  std::string source_extension = ".py";
};

// Lists packages under root: one package per immediate child directory that
// contains at least one source file anywhere beneath it. Symlinks are not
// followed. Files are returned with execution-flow ranks already assigned.
// Throws std::runtime_error when root is missing or unreadable.
std::vector<PackageSource> discover_packages(const std::filesystem::path& root, RunLog& log,
                                             const DiscoverOptions& options = {});

// Assigns ranks in place: root setup.py first, then __init__.py files
// (shallower directories first), then everything else; ties break on
// lexicographic rel_path. Deterministic for a fixed file set.
void order_files(PackageSource& package);

// Reads a file as sanitized UTF-8 text. Returns false (and warns) when the
// file cannot be read.
bool read_source_text(const std::filesystem::path& path, std::string& out, RunLog& log);

}  // namespace malind

#endif  // MALIND_CORPUS_HPP_
