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

#include "malind/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "malind/util.hpp"

namespace malind {

namespace fs = std::filesystem;

namespace {

std::size_t path_depth(const std::string& rel_path) {
  return static_cast<std::size_t>(std::count(rel_path.begin(), rel_path.end(), '/'));
}

std::string basename_of(const std::string& rel_path) {
  auto pos = rel_path.rfind('/');
  return pos == std::string::npos ? rel_path : rel_path.substr(pos + 1);
}

// Tier 0: root setup.py. Tier 1: any __init__.py, shallow first. Tier 2: rest.
std::tuple<int, std::size_t, std::string> order_key(const SourceFile& f) {
  if (f.rel_path == "setup.py") return {0, 0, f.rel_path};
  if (basename_of(f.rel_path) == "__init__.py") return {1, path_depth(f.rel_path), f.rel_path};
  return {2, 0, f.rel_path};
}

void walk_package(const fs::path& pkg_root, PackageSource& pkg, RunLog& log,
                  const DiscoverOptions& options) {
  std::error_code ec;
  fs::recursive_directory_iterator it(pkg_root, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    log.warn("cannot enumerate package " + pkg.package_id + ": " + ec.message());
    return;
  }
  for (auto end = fs::recursive_directory_iterator(); it != end; it.increment(ec)) {
    if (ec) {
      log.warn("walk error in " + pkg.package_id + ": " + ec.message());
      break;
    }
    const fs::directory_entry& entry = *it;
    if (entry.is_symlink(ec)) {
      if (entry.is_directory(ec)) it.disable_recursion_pending();
      log.warn("skipping symlink " + entry.path().generic_string());
      continue;
    }
    if (!entry.is_regular_file(ec)) continue;
    std::string rel = fs::relative(entry.path(), pkg_root, ec).generic_string();
    if (ec) continue;
    if (!ends_with(rel, options.source_extension)) {
      pkg.unranked_files.push_back(rel);
      continue;
    }
    std::uint64_t size = entry.file_size(ec);
    if (ec) {
      log.warn("cannot stat " + entry.path().generic_string() + ", skipped");
      continue;
    }
    if (size > options.max_file_bytes) {
      log.warn("oversized source " + entry.path().generic_string() + " (" +
               std::to_string(size) + " bytes), skipped");
      continue;
    }
    SourceFile sf;
    sf.rel_path = rel;
    sf.byte_len = size;
    // line_count is filled lazily by the scanner when text is read; a quick
    // pass here keeps the catalog self-contained for stats-only uses.
    std::ifstream in(entry.path(), std::ios::binary);
    if (!in) {
      log.warn("unreadable source " + entry.path().generic_string() + ", skipped");
      continue;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    sf.line_count = count_lines(text);
    pkg.files.push_back(std::move(sf));
  }
  std::sort(pkg.unranked_files.begin(), pkg.unranked_files.end());
}

}  // namespace

void order_files(PackageSource& package) {
  std::sort(package.files.begin(), package.files.end(),
            [](const SourceFile& a, const SourceFile& b) { return order_key(a) < order_key(b); });
  for (std::size_t i = 0; i < package.files.size(); ++i) {
    package.files[i].rank = static_cast<int>(i);
  }
}

std::vector<PackageSource> discover_packages(const fs::path& root, RunLog& log,
                                             const DiscoverOptions& options) {
  std::error_code ec;
  if (!fs::exists(root, ec) || ec) {
    throw std::runtime_error("corpus root does not exist: " + root.generic_string());
  }
  if (!fs::is_directory(root, ec) || ec) {
    throw std::runtime_error("corpus root is not a directory: " + root.generic_string());
  }
  fs::directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    throw std::runtime_error("corpus root is unreadable: " + root.generic_string() + ": " +
                             ec.message());
  }

  std::vector<PackageSource> packages;
  for (auto end = fs::directory_iterator(); it != end; it.increment(ec)) {
    if (ec) throw std::runtime_error("error enumerating corpus root: " + ec.message());
    const fs::directory_entry& entry = *it;
    if (entry.is_symlink(ec)) continue;
    if (!entry.is_directory(ec)) continue;
    PackageSource pkg;
    pkg.package_id = entry.path().filename().string();
    pkg.root = entry.path();
    walk_package(entry.path(), pkg, log, options);
    if (pkg.files.empty()) continue;
    order_files(pkg);
    packages.push_back(std::move(pkg));
  }
  std::sort(packages.begin(), packages.end(),
            [](const PackageSource& a, const PackageSource& b) {
              return a.package_id < b.package_id;
            });
  return packages;
}

bool read_source_text(const fs::path& path, std::string& out, RunLog& log) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    log.warn("unreadable file " + path.generic_string() + ", skipped");
    return false;
  }
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  out = sanitize_utf8(raw);
  return true;
}

}  // namespace malind
