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

#include "icistat/mcp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "binary_io.hpp"
#include "icistat/error.hpp"
#include "icistat/numeric.hpp"

namespace icistat {

namespace {

constexpr std::size_t kIterationsPerChunk = 16;

void check_links(std::span<const Link> links, const PartitionSpec* spec) {
  for (const auto& link : links) {
    if (link.set == nullptr) fail(Errc::invalid_argument, "link without a typical set");
    if (!(link.lambda > 0.0)) fail(Errc::invalid_argument, "link lambda must be positive");
    if (spec != nullptr && !(link.set->spec() == *spec)) {
      fail(Errc::invalid_argument, "typical sets do not share the same partition");
    }
  }
}

// Permuted copy of `source` added into `block` with a scale factor.
void add_permuted(std::span<double> block, std::span<const double> source, double scale,
                  std::vector<double>& scratch, Rng& rng) {
  scratch.assign(source.begin(), source.end());
  shuffle(std::span<double>(scratch), rng);
  for (std::size_t i = 0; i < block.size(); ++i) block[i] += scale * scratch[i];
}

// Cumulative loaded probabilities for j = 1..loaded.
std::vector<double> loaded_cumulative(const PartitionSpec& spec, int loaded) {
  std::vector<double> cum(loaded);
  double total = 0.0;
  for (int j = 1; j <= loaded; ++j) total += spec.length(j);
  double acc = 0.0;
  for (int j = 1; j <= loaded; ++j) {
    acc += spec.length(j) / total;
    cum[j - 1] = acc;
  }
  cum.back() = 1.0;
  return cum;
}

int draw_interval(const std::vector<double>& cumulative, Rng& rng) {
  const double u = uniform_open(rng);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                   static_cast<std::ptrdiff_t>(cumulative.size()) - 1)) +
         1;
}

std::size_t checked_blocks(int intervals, int compelled) {
  double blocks = std::pow(static_cast<double>(intervals), compelled);
  if (blocks > 1e8) fail(Errc::out_of_range, "too many interval combinations");
  return static_cast<std::size_t>(blocks);
}

}  // namespace

void McpConfig::validate(std::size_t interferers) const {
  partition.validate();
  if (compelled < 1 || static_cast<std::size_t>(compelled) >= interferers) {
    fail(Errc::invalid_argument, "compelled link count must satisfy 1 <= M < N");
  }
  if (loaded_intervals < 1 || loaded_intervals >= partition.intervals) {
    fail(Errc::invalid_argument, "loaded interval count must satisfy 1 <= J' < J");
  }
  if (iterations < 1) fail(Errc::invalid_argument, "at least one iteration is required");
  if (histogram_bins < 1) fail(Errc::invalid_argument, "histogram needs at least one bin");
  if (!(histogram_lower_quantile > 0.0 && histogram_upper_tail > 0.0 &&
        histogram_lower_quantile + histogram_upper_tail < 1.0)) {
    fail(Errc::invalid_argument, "histogram quantile range is empty");
  }
}

CorrectionFactors correction_factors(std::span<const double> lambdas, int compelled,
                                     int loaded_intervals, const PartitionSpec& partition) {
  partition.validate();
  if (compelled < 1 || static_cast<std::size_t>(compelled) >= lambdas.size()) {
    fail(Errc::invalid_argument, "compelled link count must satisfy 1 <= M < N");
  }
  if (loaded_intervals < 1 || loaded_intervals > partition.intervals) {
    fail(Errc::invalid_argument, "loaded interval count out of range");
  }
  CompensatedSum head, tail, loaded;
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    (n < static_cast<std::size_t>(compelled) ? head : tail) += lambdas[n];
  }
  for (int j = 1; j <= loaded_intervals; ++j) loaded += partition.length(j);
  if (!(head.value() > 0.0)) fail(Errc::invalid_argument, "compelled lambdas sum to zero");
  CorrectionFactors f;
  f.alpha = 1.0 / loaded.value();
  const double ratio = tail.value() / head.value();
  f.over = 1.0 + ratio;
  f.under = 1.0 - (f.alpha - 1.0) * ratio;
  return f;
}

double PanelSet::moment(int k) const {
  CompensatedSum total;
  for (std::size_t b = 0; b < blocks(); ++b) {
    CompensatedSum block;
    for (std::size_t i = 0; i < block_size; ++i) {
      block += std::pow(amplitudes[b * block_size + i], k);
    }
    total += block_weights[b] * block.value() / static_cast<double>(block_size);
  }
  return total.value();
}

PanelSet combine_compelled(std::span<const Link> links, const CorrectionFactors& factors,
                           int loaded_intervals, Rng& rng) {
  if (links.empty()) fail(Errc::invalid_argument, "at least one compelled link is required");
  check_links(links, &links.front().set->spec());
  const PartitionSpec& spec = links.front().set->spec();
  if (loaded_intervals < 0 || loaded_intervals > spec.intervals) {
    fail(Errc::invalid_argument, "loaded interval count out of range");
  }
  const int m = static_cast<int>(links.size());
  const std::size_t p = static_cast<std::size_t>(spec.points);
  const std::size_t blocks = checked_blocks(spec.intervals, m);

  PanelSet panel;
  panel.block_size = p;
  panel.compelled = m;
  panel.amplitudes.assign(blocks * p, 0.0);
  panel.block_weights.resize(blocks);
  panel.combos.resize(blocks * m);

  std::vector<int> combo(m, 1);
  std::vector<double> scratch;
  CompensatedSum weight_total;
  for (std::size_t b = 0; b < blocks; ++b) {
    double weight = 1.0;
    std::span<double> block(panel.amplitudes.data() + b * p, p);
    for (int l = 0; l < m; ++l) {
      const int j = combo[l];
      panel.combos[b * m + l] = j;
      weight *= spec.length(j);
      const double corr = j <= loaded_intervals ? factors.under : factors.over;
      add_permuted(block, links[l].set->interval(j), links[l].lambda * corr, scratch, rng);
    }
    panel.block_weights[b] = weight;
    weight_total += weight;
    // Odometer over combos, last link fastest.
    for (int l = m - 1; l >= 0; --l) {
      if (++combo[l] <= spec.intervals) break;
      combo[l] = 1;
    }
  }
  const double norm = weight_total.value();
  for (auto& w : panel.block_weights) w /= norm;
  return panel;
}

void add_noncompelled(PanelSet& panel, std::span<const Link> links, int loaded_intervals,
                      Rng& rng) {
  if (links.empty()) return;
  check_links(links, &links.front().set->spec());
  const PartitionSpec& spec = links.front().set->spec();
  if (static_cast<std::size_t>(spec.points) != panel.block_size) {
    fail(Errc::invalid_argument, "typical set points do not match the panel block size");
  }
  if (loaded_intervals < 1 || loaded_intervals > spec.intervals) {
    fail(Errc::invalid_argument, "loaded interval count out of range");
  }
  const auto cumulative = loaded_cumulative(spec, loaded_intervals);
  const std::size_t p = panel.block_size;
  std::vector<double> scratch;
  for (const auto& link : links) {
    for (std::size_t b = 0; b < panel.blocks(); ++b) {
      const int j = draw_interval(cumulative, rng);
      std::span<double> block(panel.amplitudes.data() + b * p, p);
      add_permuted(block, link.set->interval(j), link.lambda, scratch, rng);
    }
  }
}

std::vector<double> WeightedHistogram::cdf_at_edges() const {
  std::vector<double> cdf(edges.size(), 0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    acc += masses[i];
    cdf[i + 1] = acc.value();
  }
  return cdf;
}

double WeightedHistogram::total_mass() const {
  CompensatedSum acc;
  for (double m : masses) acc += m;
  return acc.value();
}

std::vector<double> quantile_log_edges(std::span<const double> values,
                                       std::span<const double> weights, std::size_t bins,
                                       double lower_quantile, double upper_tail) {
  if (values.size() != weights.size() || values.empty()) {
    fail(Errc::invalid_argument, "values and weights must be non-empty and of equal length");
  }
  if (bins < 1) fail(Errc::invalid_argument, "histogram needs at least one bin");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  CompensatedSum total;
  for (double w : weights) total += w;
  const double t = total.value();

  double lo = 0.0, hi = 0.0, smallest_positive = 0.0;
  CompensatedSum acc;
  bool have_lo = false;
  for (std::size_t idx : order) {
    if (smallest_positive == 0.0 && values[idx] > 0.0) smallest_positive = values[idx];
    acc += weights[idx];
    const double c = acc.value() / t;
    if (!have_lo && c >= lower_quantile) {
      lo = values[idx];
      have_lo = true;
    }
    if (c >= 1.0 - upper_tail) {
      hi = values[idx];
      break;
    }
  }
  if (hi == 0.0) hi = values[order.back()];
  if (!(lo > 0.0)) lo = smallest_positive;
  if (!(lo > 0.0)) fail(Errc::invalid_argument, "no positive values for a log-spaced histogram");
  if (!(hi > lo)) hi = lo * 2.0;
  std::vector<double> edges(bins + 1);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(bins));
  }
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

namespace {

class LogBinner {
 public:
  explicit LogBinner(const std::vector<double>& edges)
      : edges_(edges),
        log_lo_(std::log(edges.front())),
        inv_step_(static_cast<double>(edges.size() - 1) /
                  (std::log(edges.back()) - std::log(edges.front()))) {}

  std::size_t operator()(double x) const {
    const std::size_t bins = edges_.size() - 1;
    if (!(x > edges_.front())) return 0;
    if (x >= edges_.back()) return bins - 1;
    auto i = static_cast<std::size_t>((std::log(x) - log_lo_) * inv_step_);
    i = std::min(i, bins - 1);
    // Rounding of the log can land one bin off near an edge.
    if (i > 0 && x < edges_[i]) --i;
    if (i + 1 < bins && x >= edges_[i + 1]) ++i;
    return i;
  }

 private:
  const std::vector<double>& edges_;
  double log_lo_;
  double inv_step_;
};

}  // namespace

WeightedHistogram weighted_histogram(std::span<const double> values,
                                     std::span<const double> weights, std::vector<double> edges) {
  if (values.size() != weights.size()) fail(Errc::invalid_argument, "size mismatch");
  if (edges.size() < 2) fail(Errc::invalid_argument, "histogram needs at least two edges");
  WeightedHistogram h;
  h.edges = std::move(edges);
  std::vector<CompensatedSum> sums(h.edges.size() - 1);
  CompensatedSum total;
  const LogBinner bin(h.edges);
  for (std::size_t i = 0; i < values.size(); ++i) {
    sums[bin(values[i])] += weights[i];
    total += weights[i];
  }
  h.masses.resize(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) h.masses[i] = sums[i].value() / total.value();
  return h;
}

namespace {

struct ChunkTotals {
  CompensatedSum mean_sum;
  CompensatedSum mean_sq_sum;
  std::vector<CompensatedSum> masses;
};

class McpRunner {
 public:
  McpRunner(const Scenario& scenario, const McpConfig& config, const TypicalSet& unit_set)
      : config_(config) {
    const auto lambdas = scenario.lambdas();
    factors_ = correction_factors(lambdas, config.compelled, config.loaded_intervals,
                                  config.partition);
    for (std::size_t n = 0; n < lambdas.size(); ++n) {
      auto& group = n < static_cast<std::size_t>(config.compelled) ? compelled_ : others_;
      group.push_back({&unit_set, lambdas[n]});
    }
  }

  const CorrectionFactors& factors() const { return factors_; }

  // Stream (seed, iteration, 0) for the compelled links, (seed, iteration, n)
  // for non-compelled link n.
  PanelSet iteration(std::size_t index) const {
    Rng rng = make_stream(config_.seed, index, 0);
    PanelSet panel = combine_compelled(compelled_, factors_, config_.loaded_intervals, rng);
    for (std::size_t n = 0; n < others_.size(); ++n) {
      Rng link_rng = make_stream(config_.seed, index, compelled_.size() + n);
      add_noncompelled(panel, std::span<const Link>(&others_[n], 1), config_.loaded_intervals,
                       link_rng);
    }
    return panel;
  }

  ChunkTotals chunk(std::size_t first, std::size_t last, const std::vector<double>& edges) const {
    ChunkTotals totals;
    totals.masses.resize(edges.size() - 1);
    const LogBinner bin(edges);
    std::vector<double> iteration_masses(edges.size() - 1);
    for (std::size_t it = first; it < last; ++it) {
      const PanelSet panel = iteration(it);
      std::fill(iteration_masses.begin(), iteration_masses.end(), 0.0);
      CompensatedSum mean;
      const std::size_t p = panel.block_size;
      for (std::size_t b = 0; b < panel.blocks(); ++b) {
        const double w = panel.block_weights[b] / static_cast<double>(p);
        double block_sum = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
          const double x = panel.amplitudes[b * p + i];
          block_sum += x;
          iteration_masses[bin(x)] += w;
        }
        mean += w * block_sum;
      }
      totals.mean_sum += mean.value();
      totals.mean_sq_sum += mean.value() * mean.value();
      for (std::size_t k = 0; k < iteration_masses.size(); ++k) {
        totals.masses[k] += iteration_masses[k];
      }
    }
    return totals;
  }

 private:
  McpConfig config_;
  CorrectionFactors factors_;
  std::vector<Link> compelled_;
  std::vector<Link> others_;
};

}  // namespace

McpResult run_mcp(const Scenario& scenario, const McpConfig& config, const TypicalSet& unit_set) {
  config.validate(scenario.interferer_count());
  if (!(unit_set.spec() == config.partition)) {
    fail(Errc::invalid_argument, "typical set partition differs from the MCP configuration");
  }
  const McpRunner runner(scenario, config, unit_set);

  McpResult result;
  result.factors = runner.factors();
  result.panel = runner.iteration(0);
  std::vector<double> probs(result.panel.amplitudes.size());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = result.panel.element_probability(i);
  auto edges = quantile_log_edges(result.panel.amplitudes, probs, config.histogram_bins,
                                  config.histogram_lower_quantile, config.histogram_upper_tail);

  const std::size_t chunks = (config.iterations + kIterationsPerChunk - 1) / kIterationsPerChunk;
  std::vector<ChunkTotals> partials(chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      const std::size_t first = c * kIterationsPerChunk;
      const std::size_t last = std::min(config.iterations, first + kIterationsPerChunk);
      partials[c] = runner.chunk(first, last, edges);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, chunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          worker();
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ChunkTotals total;
  total.masses.resize(edges.size() - 1);
  for (const auto& part : partials) {
    total.mean_sum.merge(part.mean_sum);
    total.mean_sq_sum.merge(part.mean_sq_sum);
    for (std::size_t k = 0; k < total.masses.size(); ++k) total.masses[k].merge(part.masses[k]);
  }
  const double n = static_cast<double>(config.iterations);
  result.iterations = config.iterations;
  result.mean = total.mean_sum.value() / n;
  const double var = std::max(0.0, total.mean_sq_sum.value() / n - result.mean * result.mean);
  result.mean_std_error = config.iterations > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  result.exact_mean = scenario.exact_mean();
  result.relative_deviation = (result.mean - result.exact_mean) / result.exact_mean;
  result.diverged = std::abs(result.relative_deviation) > kMcpDivergenceThreshold;

  result.histogram.edges = std::move(edges);
  result.histogram.masses.resize(total.masses.size());
  CompensatedSum mass;
  for (const auto& m : total.masses) mass += m.value();
  for (std::size_t k = 0; k < total.masses.size(); ++k) {
    result.histogram.masses[k] = total.masses[k].value() / mass.value();
  }
  return result;
}

namespace {
constexpr std::uint32_t kPanelFormatVersion = 1;
}  // namespace

void write_panel_set(std::ostream& out, const PanelSet& panel) {
  out.write("ICPS", 4);
  binary::put_u32(out, kPanelFormatVersion);
  binary::put_u32(out, static_cast<std::uint32_t>(panel.block_size));
  binary::put_u32(out, static_cast<std::uint32_t>(panel.compelled));
  binary::put_u64(out, panel.blocks());
  for (double w : panel.block_weights) binary::put_f64(out, w);
  for (int j : panel.combos) binary::put_u32(out, static_cast<std::uint32_t>(j));
  for (double a : panel.amplitudes) binary::put_f64(out, a);
  if (!out) fail(Errc::io_error, "panel set write failed");
}

PanelSet read_panel_set(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "ICPS") fail(Errc::parse_error, "not a panel set file");
  const auto version = binary::get_u32(in);
  if (version != kPanelFormatVersion) {
    fail(Errc::cache_mismatch, "panel set format version " + std::to_string(version) +
                                   " is not supported");
  }
  PanelSet panel;
  panel.block_size = binary::get_u32(in);
  panel.compelled = static_cast<int>(binary::get_u32(in));
  const auto blocks = binary::get_u64(in);
  if (panel.block_size == 0 || blocks == 0 || blocks > (std::uint64_t{1} << 32)) {
    fail(Errc::parse_error, "panel set header is inconsistent");
  }
  panel.block_weights.resize(blocks);
  for (auto& w : panel.block_weights) w = binary::get_f64(in);
  panel.combos.resize(blocks * static_cast<std::size_t>(panel.compelled));
  for (auto& j : panel.combos) j = static_cast<int>(binary::get_u32(in));
  panel.amplitudes.resize(blocks * panel.block_size);
  for (auto& a : panel.amplitudes) a = binary::get_f64(in);
  return panel;
}

McpResult run_mcp(const Scenario& scenario, const McpConfig& config) {
  config.validate(scenario.interferer_count());
  const TypicalSet unit_set =
      build_typical_set(scenario.sigma_db(), config.partition, config.threads);
  return run_mcp(scenario, config, unit_set);
}

}  // namespace icistat
