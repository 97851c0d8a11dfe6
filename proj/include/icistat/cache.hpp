// Copyright 2026 The icistat Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "icistat/mcp.hpp"
#include "icistat/typical_set.hpp"

namespace icistat {

inline constexpr const char* kCacheEnvVar = "ICISTAT_CACHE_DIR";

std::uint64_t fnv1a64(std::string_view data) noexcept;

/// Directory of key-addressed blobs. Each file stores its full key, so hash
/// collisions and stale formats read as misses.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);
  /// Cache at $ICISTAT_CACHE_DIR, or none when the variable is unset or empty.
  static std::optional<Cache> from_env();

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path path_for(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  void put(std::string_view key, std::string_view blob) const;

 private:
  std::filesystem::path dir_;
};

std::string typical_set_cache_key(double sigma_db, const PartitionSpec& spec);

/// Loads the typical set from the cache or builds and stores it.
TypicalSet cached_typical_set(double sigma_db, const PartitionSpec& spec, unsigned threads,
                              const Cache* cache);

}  // namespace icistat
