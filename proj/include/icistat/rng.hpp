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
#include <random>
#include <span>
#include <utility>

namespace icistat {

using Rng = std::mt19937_64;

/// Independent generator for (master seed, stream, substream). Seeding goes
/// through std::seed_seq, so streams are reproducible across platforms.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream,
                       std::uint64_t substream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(substream),
                    static_cast<std::uint32_t>(substream >> 32),
                    0x1C15u};
  return Rng(seq);
}

/// Uniform on the open interval (0, 1).
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by Lemire's multiply-shift rejection.
inline std::uint32_t bounded(Rng& rng, std::uint32_t bound) {
  std::uint64_t m = (rng() >> 32) * static_cast<std::uint64_t>(bound);
  auto low = static_cast<std::uint32_t>(m);
  if (low < bound) {
    const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
    while (low < threshold) {
      m = (rng() >> 32) * static_cast<std::uint64_t>(bound);
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

/// Fisher-Yates shuffle. Uses its own bounded draws instead of std::shuffle so
/// the resulting order does not depend on the standard library vendor.
// Hands out the two 32-bit halves of each 64-bit draw.
class HalfWordSource {
 public:
  explicit HalfWordSource(Rng& rng) : rng_(rng) {}
  std::uint32_t operator()() {
    if (have_low_) {
      have_low_ = false;
      return low_;
    }
    const std::uint64_t w = rng_();
    low_ = static_cast<std::uint32_t>(w);
    have_low_ = true;
    return static_cast<std::uint32_t>(w >> 32);
  }

 private:
  Rng& rng_;
  std::uint32_t low_ = 0;
  bool have_low_ = false;
};

inline std::uint32_t bounded(HalfWordSource& src, std::uint32_t bound) {
  std::uint64_t m = static_cast<std::uint64_t>(src()) * bound;
  auto low = static_cast<std::uint32_t>(m);
  if (low < bound) {
    const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
    while (low < threshold) {
      m = static_cast<std::uint64_t>(src()) * bound;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

// Fisher-Yates.
template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
  HalfWordSource src(rng);
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = bounded(src, static_cast<std::uint32_t>(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace icistat
