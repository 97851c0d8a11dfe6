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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "icistat/numeric.hpp"
#include "icistat/rng.hpp"
#include "icistat/scenario.hpp"

namespace icistat {

/// Streaming raw moments E{X^k}, k = 1..4.
class MomentAccumulator {
 public:
  static constexpr int kMaxOrder = 4;

  void add(double x) noexcept;
  void merge(const MomentAccumulator& other) noexcept;
  std::uint64_t count() const noexcept { return count_; }
  double moment(int k) const;
  double mean() const { return moment(1); }
  double variance() const;

 private:
  std::uint64_t count_ = 0;
  std::array<CompensatedSum, kMaxOrder> sums_{};
};

/// Mergeable log-bucket quantile sketch with bounded relative error on
/// positive values; zeros are counted separately.
class QuantileSketch {
 public:
  explicit QuantileSketch(double relative_accuracy = 1e-3);

  void add(double x);
  void merge(const QuantileSketch& other);
  std::uint64_t count() const noexcept { return count_; }
  double relative_accuracy() const noexcept { return accuracy_; }
  /// Value v with approximately q of the mass below it.
  double quantile(double q) const;
  /// Fraction of values <= x, resolved to bucket granularity.
  double cdf(double x) const;

 private:
  int index(double x) const;
  double bucket_value(int idx) const;

  double accuracy_;
  double log_gamma_;
  std::uint64_t count_ = 0;
  std::uint64_t zeros_ = 0;
  int offset_ = 0;
  std::vector<std::uint64_t> buckets_;
};

enum class SimulationMode { exact, approx };
const char* to_string(SimulationMode mode) noexcept;
SimulationMode parse_simulation_mode(const char* text);

struct SimulationConfig {
  std::size_t draws = 1000000;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  /// Samples are kept (for exact sorting) when draws do not exceed this.
  std::size_t keep_samples_up_to = 10000000;
  double sketch_accuracy = 1e-3;
};

struct SimulationResult {
  SimulationMode mode = SimulationMode::exact;
  MomentAccumulator moments;
  QuantileSketch sketch;
  std::vector<double> samples;  ///< in draw order; empty above the keep limit
};

/// Draws are split into fixed blocks, block b using RNG stream (seed, b), so
/// results do not depend on the thread count.
SimulationResult simulate(const Scenario& scenario, SimulationMode mode,
                          const SimulationConfig& config);

/// Exact gain: UT uniform in the sector, position-dependent path loss.
std::vector<double> simulate_exact(const Scenario& scenario, std::size_t draws, Rng& rng);
/// Approximate gain: lambdas in place of the path loss.
std::vector<double> simulate_approx(const Scenario& scenario, std::size_t draws, Rng& rng);

/// Largest |F_emp - F| over a sample, F evaluated at every sample point.
template <typename Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf);

}  // namespace icistat

#include <algorithm>
#include <cmath>

namespace icistat {

template <typename Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    worst = std::max({worst, std::abs(f - static_cast<double>(i) / n),
                      std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return worst;
}

}  // namespace icistat
