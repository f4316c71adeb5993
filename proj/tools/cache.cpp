// Copyright 2026 The lfam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace lfamcli {

std::uint64_t Cache::fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Cache::path_for(const std::string& ns, const std::string& key) const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(key));
  return dir_ + "/" + ns + "/" + buf + ".json";
}

std::optional<nlohmann::ordered_json> Cache::load(const std::string& ns,
                                                  const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path_for(ns, key));
  if (!in) return std::nullopt;
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (...) {
    return std::nullopt;
  }
  if (!doc.contains("version") || doc["version"] != version_) return std::nullopt;
  if (!doc.contains("key") || doc["key"] != key) return std::nullopt;
  if (!doc.contains("data")) return std::nullopt;
  return doc["data"];
}

bool Cache::store(const std::string& ns, const std::string& key,
                  const nlohmann::ordered_json& data) const {
  if (!enabled()) return false;
  std::error_code ec;
  fs::create_directories(dir_ + "/" + ns, ec);
  if (ec) return false;
  nlohmann::ordered_json doc;
  doc["version"] = version_;
  doc["key"] = key;
  doc["data"] = data;
  std::string final_path = path_for(ns, key);
  // write-then-rename so concurrent writers never expose partial entries
  std::ostringstream tmp_name;
  tmp_name << final_path << ".tmp." << ::getpid();
  {
    std::ofstream out(tmp_name.str());
    if (!out) return false;
    out << doc.dump(2) << "\n";
    if (!out) return false;
  }
  fs::rename(tmp_name.str(), final_path, ec);
  return !ec;
}

}  // namespace lfamcli
