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

#include "malind/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace malind {

namespace {

using Cat = Category;
using Scope = RuleScope;

struct Row {
  const char* id;
  const char* name;
  Cat cat;
  int count;
  Scope scope;
  const char* rule;
};

// clang-format off
const Row kRows[] = {
  {"EXS-001", "Import-Time Execution", Cat::ExecutionStage, 25, Scope::Statement,
   "execution-capable call at module top level of an __init__.py"},
  {"EXS-002", "Install-Time Execution", Cat::ExecutionStage, 155, Scope::Statement,
   "execution-capable call in the top-level scope of the root setup.py, outside the setup() call"},
  {"EXS-003", "Lifecycle Hook Hijack", Cat::ExecutionStage, 111, Scope::Statement,
   "class overriding an installation hook whose run() body executes code, registered through cmdclass"},
  {"EXM-001", "Dynamic Evaluation", Cat::ExecutionMechanism, 81, Scope::Statement,
   "exec/eval/compile invoked on string or computed payloads"},
  {"EXM-002", "Conditional Payload Trigger", Cat::ExecutionMechanism, 70, Scope::Statement,
   "execution-capable call guarded by an operating-system test (os.name, sys.platform, platform.system)"},
  {"EXM-003", "Binary Execution", Cat::ExecutionMechanism, 35, Scope::Statement,
   "process launch whose command references a compiled binary (.exe/.dll/.bin/.so) or previously staged bytes"},
  {"EXM-004", "Hidden Code Execution", Cat::ExecutionMechanism, 165, Scope::Statement,
   "subprocess creation with hidden-window flags, windowless interpreters, or detached 'start' idiom"},
  {"EXM-005", "Dynamic Module Import", Cat::ExecutionMechanism, 46, Scope::Statement,
   "__import__/import_module on computed names, or import statements embedded in executable string payloads"},
  {"EXM-006", "Dynamic Package Install", Cat::ExecutionMechanism, 39, Scope::Statement,
   "process call whose command installs packages at runtime (pip install / -m pip)"},
  {"EXM-007", "Script File Execution", Cat::ExecutionMechanism, 28, Scope::Statement,
   "process call executing a bundled script file (.py/.sh/.ps1/.bat) other than the current file"},
  {"EXM-008", "Shell Command Execution", Cat::ExecutionMechanism, 244, Scope::Statement,
   "os.system/os.popen or subprocess with shell=True or a single command-string argument"},
  {"EXF-001", "Data Exfiltration", Cat::Exfiltration, 114, Scope::Statement,
   "outbound request embedding environment reads or secret-like identifiers (token/password/secret/key)"},
  {"EXF-002", "File Exfiltration", Cat::Exfiltration, 15, Scope::Statement,
   "outbound request posting file handles or file contents (files= payloads, read()-into-body)"},
  {"EXF-003", "DNS Tunneling", Cat::Exfiltration, 3, Scope::Statement,
   "DNS-resolving command (ping/nslookup/dig) whose queried name is assembled from data"},
  {"EXF-004", "Webhook Exfiltration", Cat::Exfiltration, 6, Scope::Statement,
   "outbound request carrying a payload to a chat/messaging webhook endpoint"},
  {"EXF-005", "Suspicious Domain Exfiltration", Cat::Exfiltration, 36, Scope::Statement,
   "outbound request carrying data to a listed collection/interaction domain"},
  {"SYS-001", "Environment Modification", Cat::SystemImpact, 7, Scope::Statement,
   "registry run-key writes, PATH/LD_PRELOAD changes, or persisted environment mutation"},
  {"SYS-002", "Startup File Persistence", Cat::SystemImpact, 4, Scope::Statement,
   "write or move targeting auto-start locations (.bashrc, LaunchAgents, Startup folder)"},
  {"SYS-003", "Crypto Wallet Harvesting", Cat::SystemImpact, 14, Scope::Statement,
   "paths referencing wallet stores (exodus, electrum, wallet.dat, metamask, .seco, passphrase.json)"},
  {"SYS-004", "Directory Enumeration", Cat::SystemImpact, 44, Scope::Statement,
   "file-system enumeration via listdir/walk/glob or captured ls/dir output"},
  {"SYS-005", "System Info Reconnaissance", Cat::SystemImpact, 217, Scope::Statement,
   "collection of host fingerprints (getlogin/getuser/gethostname/platform/uname/environ reads)"},
  {"SYS-006", "File Relocation", Cat::SystemImpact, 23, Scope::Statement,
   "rename/move calls or move/mv commands relocating artifacts outside the package or disguising them"},
  {"SYS-007", "File Deletion", Cat::SystemImpact, 35, Scope::Statement,
   "remove/unlink/rmtree calls or del/rm commands erasing artifacts"},
  {"SYS-008", "Arbitrary File Write", Cat::SystemImpact, 61, Scope::Statement,
   "writing network-derived or decoded content through write/binary-write file modes"},
  {"SYS-009", "Sensitive Path Write", Cat::SystemImpact, 6, Scope::Statement,
   "write/mkdir targeting protected system paths (Startup, System32, Program Files, /etc, LaunchDaemons)"},
  {"NET-001", "Geolocation Lookup", Cat::NetworkOperations, 4, Scope::Statement,
   "request to an external IP-lookup/geolocation API"},
  {"NET-002", "Mining Pool Connection", Cat::NetworkOperations, 2, Scope::Statement,
   "mining-pool connection strings (stratum+tcp/stratum+ssl, nicehash, xmrig-style flags)"},
  {"NET-003", "Suspicious Connection", Cat::NetworkOperations, 76, Scope::Statement,
   "connection to IP-literal hosts, listed suspicious domains, or rare-TLD destinations"},
  {"NET-004", "Archive Dropper", Cat::NetworkOperations, 6, Scope::Statement,
   "download of a compressed archive, or download followed by in-file extraction"},
  {"NET-005", "Binary Dropper", Cat::NetworkOperations, 22, Scope::Statement,
   "download whose URL path ends in a compiled-binary extension"},
  {"NET-006", "Payload Dropper", Cat::NetworkOperations, 37, Scope::Statement,
   "response body fed to exec/eval without touching disk, or bare fetch from a paste/CDN host"},
  {"NET-007", "Script Dropper", Cat::NetworkOperations, 1, Scope::Statement,
   "download whose URL path ends in an interpreted-script extension"},
  {"NET-008", "Reverse Shell", Cat::NetworkOperations, 9, Scope::Statement,
   "socket connect to a literal host:port combined with stdio duplication or interactive shell spawn"},
  {"NET-009", "SSL Validation Bypass", Cat::NetworkOperations, 6, Scope::Statement,
   "verify=False, unverified SSL contexts, or curl -k style flags in command strings"},
  {"NET-010", "Unencrypted Communication", Cat::NetworkOperations, 8, Scope::Statement,
   "outbound request to a plain http:// URL"},
  {"DEF-001", "ASCII Art Deception", Cat::DefenseEvasion, 1, Scope::Statement,
   "printed multi-line decorative art adjacent to execution-capable code"},
  {"DEF-002", "Computational Obfuscation", Cat::DefenseEvasion, 41, Scope::Statement,
   "underscore-mangled identifier swarms, chr/ord arithmetic, integer-list decoding, getattr-built calls"},
  {"DEF-003", "Encoding-Based Obfuscation", Cat::DefenseEvasion, 226, Scope::Statement,
   "base64/hex/codecs decoding of literal blobs feeding execution, network, or file writes"},
  {"DEF-004", "Encryption-Based Obfuscation", Cat::DefenseEvasion, 29, Scope::Statement,
   "decryption of literal ciphertext (Fernet/AES-style) feeding exec/eval"},
  {"DEF-005", "Embedded String Payload", Cat::DefenseEvasion, 7, Scope::Statement,
   "string literal containing executable code that is written to a file or passed to an executor"},
  {"DEF-006", "Error Suppression", Cat::DefenseEvasion, 384, Scope::Statement,
   "bare/broad except-pass, suppress contexts, or null-device redirection around sensitive operations"},
  {"MET-001", "Suspicious Author Identity", Cat::MetadataManipulation, 222, Scope::Manifest,
   "placeholder or high-randomness author name/email in the setup manifest"},
  {"MET-002", "Combosquatting", Cat::MetadataManipulation, 18, Scope::Manifest,
   "package name formed by affixing words to a popular package name"},
  {"MET-003", "Suspicious Dependency", Cat::MetadataManipulation, 29, Scope::Manifest,
   "declared dependency on a listed suspicious distribution or one never imported by the package"},
  {"MET-004", "Description Anomaly", Cat::MetadataManipulation, 49, Scope::Manifest,
   "missing, trivially short, high-randomness, or token-stuffed description"},
  {"MET-005", "Decoy Functionality", Cat::MetadataManipulation, 153, Scope::PackageLevel,
   "plausible benign description on a package that also carries execution/network/system findings"},
  {"MET-006", "Typosquatting", Cat::MetadataManipulation, 48, Scope::Manifest,
   "package name within small edit distance or one homoglyph of a popular package name"},
};
// clang-format on

constexpr int kRegistryVersion = 1;

Cat parse_category(const std::string& s) {
  for (int i = 0; i < 7; ++i) {
    Cat c = static_cast<Cat>(i);
    if (category_name(c) == s) return c;
  }
  throw std::runtime_error("unknown category: " + s);
}

Scope parse_scope(const std::string& s) {
  if (s == "statement") return Scope::Statement;
  if (s == "manifest") return Scope::Manifest;
  if (s == "package") return Scope::PackageLevel;
  throw std::runtime_error("unknown scope: " + s);
}

}  // namespace

std::string_view category_name(Category c) {
  switch (c) {
    case Category::ExecutionStage: return "ExecutionStage";
    case Category::ExecutionMechanism: return "ExecutionMechanism";
    case Category::Exfiltration: return "Exfiltration";
    case Category::SystemImpact: return "SystemImpact";
    case Category::NetworkOperations: return "NetworkOperations";
    case Category::DefenseEvasion: return "DefenseEvasion";
    case Category::MetadataManipulation: return "MetadataManipulation";
  }
  return "?";
}

std::string_view category_prefix(Category c) {
  switch (c) {
    case Category::ExecutionStage: return "EXS";
    case Category::ExecutionMechanism: return "EXM";
    case Category::Exfiltration: return "EXF";
    case Category::SystemImpact: return "SYS";
    case Category::NetworkOperations: return "NET";
    case Category::DefenseEvasion: return "DEF";
    case Category::MetadataManipulation: return "MET";
  }
  return "?";
}

std::optional<Category> category_from_prefix(std::string_view prefix) {
  for (int i = 0; i < 7; ++i) {
    Category c = static_cast<Category>(i);
    if (category_prefix(c) == prefix) return c;
  }
  return std::nullopt;
}

std::string_view scope_name(RuleScope s) {
  switch (s) {
    case RuleScope::Statement: return "statement";
    case RuleScope::Manifest: return "manifest";
    case RuleScope::PackageLevel: return "package";
  }
  return "?";
}

Taxonomy::Taxonomy(std::vector<IndicatorDef> defs, int version)
    : defs_(std::move(defs)), version_(version) {
  std::sort(defs_.begin(), defs_.end(),
            [](const IndicatorDef& a, const IndicatorDef& b) { return a.id < b.id; });
  validate();
}

void Taxonomy::validate() const {
  if (defs_.size() != 47) {
    throw std::runtime_error("taxonomy must hold exactly 47 indicators, got " +
                             std::to_string(defs_.size()));
  }
  std::set<std::string> ids;
  std::map<Category, int> sizes;
  for (const auto& d : defs_) {
    if (!ids.insert(d.id).second) throw std::runtime_error("duplicate indicator id " + d.id);
    if (d.id.size() != 7 || d.id[3] != '-') throw std::runtime_error("malformed id " + d.id);
    auto cat = category_from_prefix(d.id.substr(0, 3));
    if (!cat || *cat != d.category) {
      throw std::runtime_error("id prefix does not match category for " + d.id);
    }
    for (int i = 4; i < 7; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(d.id[i]))) {
        throw std::runtime_error("malformed id " + d.id);
      }
    }
    sizes[d.category]++;
  }
  const std::map<Category, int> expected = {
      {Category::ExecutionStage, 3},     {Category::ExecutionMechanism, 8},
      {Category::Exfiltration, 5},       {Category::SystemImpact, 9},
      {Category::NetworkOperations, 10}, {Category::DefenseEvasion, 6},
      {Category::MetadataManipulation, 6},
  };
  if (sizes != expected) throw std::runtime_error("category sizes do not match the taxonomy");
}

const Taxonomy& Taxonomy::builtin() {
  static const Taxonomy instance = [] {
    std::vector<IndicatorDef> defs;
    defs.reserve(std::size(kRows));
    for (const Row& r : kRows) {
      defs.push_back({r.id, r.name, r.cat, r.count, r.scope, r.rule});
    }
    return Taxonomy(std::move(defs), kRegistryVersion);
  }();
  return instance;
}

const IndicatorDef* Taxonomy::lookup(std::string_view id) const {
  auto it = std::lower_bound(defs_.begin(), defs_.end(), id,
                             [](const IndicatorDef& d, std::string_view key) { return d.id < key; });
  if (it == defs_.end() || it->id != id) return nullptr;
  return &*it;
}

std::vector<const IndicatorDef*> Taxonomy::list(std::optional<Category> category) const {
  std::vector<const IndicatorDef*> out;
  for (const auto& d : defs_) {
    if (!category || d.category == *category) out.push_back(&d);
  }
  return out;
}

std::string Taxonomy::to_json() const {
  nlohmann::ordered_json doc;
  doc["version"] = version_;
  auto& arr = doc["indicators"] = nlohmann::ordered_json::array();
  for (const auto& d : defs_) {
    nlohmann::ordered_json rec;
    rec["id"] = d.id;
    rec["name"] = d.name;
    rec["category"] = std::string(category_name(d.category));
    rec["reference_count"] = d.reference_count;
    rec["scope"] = std::string(scope_name(d.scope));
    rec["rule"] = d.rule;
    arr.push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

Taxonomy Taxonomy::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open taxonomy file: " + path.generic_string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed taxonomy file: " + std::string(e.what()));
  }
  int version = doc.value("version", 0);
  if (version != kRegistryVersion) {
    throw std::runtime_error("unsupported taxonomy version " + std::to_string(version));
  }
  std::vector<IndicatorDef> defs;
  for (const auto& rec : doc.at("indicators")) {
    IndicatorDef d;
    d.id = rec.at("id").get<std::string>();
    d.name = rec.at("name").get<std::string>();
    d.category = parse_category(rec.at("category").get<std::string>());
    d.reference_count = rec.at("reference_count").get<int>();
    d.scope = parse_scope(rec.at("scope").get<std::string>());
    d.rule = rec.value("rule", "");
    defs.push_back(std::move(d));
  }
  return Taxonomy(std::move(defs), version);
}

std::string Taxonomy::catalog_text() const {
  std::ostringstream out;
  out << "malind indicator catalog (registry v" << version_ << ", " << defs_.size()
      << " indicators)\n";
  Category last = Category::MetadataManipulation;
  bool first = true;
  for (const auto& d : defs_) {
    if (first || d.category != last) {
      int total = 0;
      for (const auto& e : defs_) {
        if (e.category == d.category) total += e.reference_count;
      }
      out << "\n" << category_name(d.category) << " (" << category_prefix(d.category)
          << ", reference occurrences: " << total << ")\n";
      last = d.category;
      first = false;
    }
    out << "  " << d.id << "  " << d.name << " [" << scope_name(d.scope) << ", "
        << d.reference_count << "]\n      " << d.rule << "\n";
  }
  return out.str();
}

}  // namespace malind
