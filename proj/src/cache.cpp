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

#include "icistat/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "icistat/error.hpp"

namespace icistat {

namespace {

constexpr std::uint32_t kCacheFormatVersion = 1;

}  // namespace

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<Cache> Cache::from_env() {
  const char* dir = std::getenv(kCacheEnvVar);
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return Cache(dir);
}

std::filesystem::path Cache::path_for(std::string_view key) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.bin",
                static_cast<unsigned long long>(fnv1a64(key)));
  return dir_ / name;
}

std::optional<std::string> Cache::get(std::string_view key) const {
  std::ifstream in(path_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string_view(magic, 4) != "ICCB") return std::nullopt;
    if (binary::get_u32(in) != kCacheFormatVersion) return std::nullopt;
    const auto key_len = binary::get_u64(in);
    if (key_len != key.size()) return std::nullopt;
    std::string stored(key_len, '\0');
    in.read(stored.data(), static_cast<std::streamsize>(key_len));
    if (!in || stored != key) return std::nullopt;
    const auto blob_len = binary::get_u64(in);
    std::string blob(blob_len, '\0');
    in.read(blob.data(), static_cast<std::streamsize>(blob_len));
    if (!in) return std::nullopt;
    return blob;
  } catch (const Error&) {
    return std::nullopt;
  }
}

void Cache::put(std::string_view key, std::string_view blob) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(Errc::io_error, "cannot create cache directory " + dir_.string());
  const auto target = path_for(key);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot write cache file " + tmp.string());
    out.write("ICCB", 4);
    binary::put_u32(out, kCacheFormatVersion);
    binary::put_u64(out, key.size());
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    binary::put_u64(out, blob.size());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) fail(Errc::io_error, "cache write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) fail(Errc::io_error, "cannot move cache file into place: " + target.string());
}

std::string typical_set_cache_key(double sigma_db, const PartitionSpec& spec) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "typical_set;sigma=%.17g;J=%d;P=%d", sigma_db, spec.intervals,
                spec.points);
  return buf;
}

TypicalSet cached_typical_set(double sigma_db, const PartitionSpec& spec, unsigned threads,
                              const Cache* cache) {
  const std::string key = typical_set_cache_key(sigma_db, spec);
  if (cache != nullptr) {
    if (auto blob = cache->get(key)) {
      try {
        std::istringstream in(*blob);
        TypicalSet set = read_typical_set(in);
        if (set.spec() == spec && set.sigma_db() == sigma_db) return set;
      } catch (const Error&) {
        // stale or damaged entry, rebuild below
      }
    }
  }
  TypicalSet set = build_typical_set(sigma_db, spec, threads);
  if (cache != nullptr) {
    std::ostringstream out;
    write_typical_set(out, set);
    cache->put(key, out.str());
  }
  return set;
}

}  // namespace icistat
