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

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "icistat/rng.hpp"
#include "icistat/scenario.hpp"
#include "icistat/typical_set.hpp"

namespace icistat {

/// Monte Carlo-panel settings. The `compelled` strongest links are combined
/// exhaustively interval by interval; the remaining links draw one of the
/// first `loaded_intervals` intervals per block.
struct McpConfig {
  int compelled = 2;
  int loaded_intervals = 3;
  std::size_t iterations = 20000;
  std::uint64_t seed = 42;
  PartitionSpec partition;
  std::size_t histogram_bins = 200;
  double histogram_lower_quantile = 1e-4;
  double histogram_upper_tail = 1e-6;
  unsigned threads = 1;

  void validate(std::size_t interferers) const;
};

/// Amplitude multipliers for compelled links: `under` for the first
/// loaded intervals, `over` for the rest. `alpha` renormalises the loaded
/// interval probabilities of the other links.
struct CorrectionFactors {
  double under = 1.0;
  double over = 1.0;
  double alpha = 1.0;
};

/// lambdas must be sorted by decreasing value; 1 <= compelled < N.
CorrectionFactors correction_factors(std::span<const double> lambdas, int compelled,
                                     int loaded_intervals, const PartitionSpec& partition = {});

/// One interfering link: a unit-mean typical set scaled by lambda.
struct Link {
  const TypicalSet* set = nullptr;
  double lambda = 1.0;
};

/// Combined typical set of the total gain: one P-element block per interval
/// combination of the compelled links.
struct PanelSet {
  std::size_t block_size = 0;
  int compelled = 0;
  std::vector<double> amplitudes;     ///< blocks * block_size
  std::vector<double> block_weights;  ///< normalised, one per block
  std::vector<int> combos;            ///< blocks * compelled, 1-based interval indices

  std::size_t blocks() const noexcept { return block_weights.size(); }
  double element_probability(std::size_t i) const noexcept {
    return block_weights[i / block_size] / static_cast<double>(block_size);
  }
  double moment(int k) const;
  double weighted_mean() const { return moment(1); }
};

/// Exhaustive interval combination of the compelled links with a fresh
/// random permutation of every interval use.
PanelSet combine_compelled(std::span<const Link> links, const CorrectionFactors& factors,
                           int loaded_intervals, Rng& rng);

/// Adds each non-compelled link: per block, one interval drawn from the
/// loaded probabilities, randomly permuted. Block weights are unchanged.
void add_noncompelled(PanelSet& panel, std::span<const Link> links, int loaded_intervals,
                      Rng& rng);

/// Probability masses over log-spaced bins. The first and last bins absorb
/// everything below and above the edge range, so the CDF at every interior
/// edge is exact.
struct WeightedHistogram {
  std::vector<double> edges;
  std::vector<double> masses;

  std::vector<double> cdf_at_edges() const;
  double total_mass() const;
};

/// Log-spaced edges from the lower-quantile to the (1 - upper_tail) weighted
/// quantile of a weighted sample.
std::vector<double> quantile_log_edges(std::span<const double> values,
                                       std::span<const double> weights, std::size_t bins,
                                       double lower_quantile, double upper_tail);

WeightedHistogram weighted_histogram(std::span<const double> values,
                                     std::span<const double> weights, std::vector<double> edges);

struct McpResult {
  PanelSet panel;                ///< realisation of iteration 0
  WeightedHistogram histogram;   ///< pooled over all iterations
  CorrectionFactors factors;
  double mean = 0.0;             ///< iteration-averaged weighted mean
  double mean_std_error = 0.0;
  double exact_mean = 0.0;
  double relative_deviation = 0.0;
  bool diverged = false;         ///< |relative_deviation| > 2%
  std::size_t iterations = 0;
};

/// Binary form: "ICPS", u32 version, u32 block size, u32 compelled,
/// u64 blocks, then weights, combos (u32) and amplitudes, little-endian.
void write_panel_set(std::ostream& out, const PanelSet& panel);
PanelSet read_panel_set(std::istream& in);

inline constexpr double kMcpDivergenceThreshold = 0.02;

/// Runs `iterations` independent MCP passes. Iteration i uses RNG stream
/// (seed, i); work is grouped in fixed chunks merged in order, so the result
/// does not depend on the thread count.
McpResult run_mcp(const Scenario& scenario, const McpConfig& config, const TypicalSet& unit_set);
McpResult run_mcp(const Scenario& scenario, const McpConfig& config);

}  // namespace icistat
