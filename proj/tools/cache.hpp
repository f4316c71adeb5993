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

#ifndef LFAM_TOOLS_CACHE_HPP
#define LFAM_TOOLS_CACHE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace lfamcli {

// One file per entry under dir/namespace/, named by a stable hash of the
// key.  Payloads are self-describing: {"version", "key", "data"}; a version
// or key mismatch on read is a miss, never stale data.
class Cache {
public:
  Cache() = default;
  Cache(std::string dir, std::string version) : dir_(std::move(dir)), version_(std::move(version)) {}

  bool enabled() const { return !dir_.empty(); }

  std::optional<nlohmann::ordered_json> load(const std::string& ns, const std::string& key) const;
  // Returns false when the directory cannot be written.
  bool store(const std::string& ns, const std::string& key,
             const nlohmann::ordered_json& data) const;

  static std::uint64_t fnv1a(const std::string& s);
  std::string path_for(const std::string& ns, const std::string& key) const;

private:
  std::string dir_;
  std::string version_;
};

}  // namespace lfamcli

#endif
