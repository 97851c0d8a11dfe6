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

#include "icistat/simulator.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "icistat/error.hpp"

namespace icistat {

void MomentAccumulator::add(double x) noexcept {
  ++count_;
  double p = x;
  for (int k = 0; k < kMaxOrder; ++k) {
    sums_[k] += p;
    p *= x;
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) noexcept {
  count_ += other.count_;
  for (int k = 0; k < kMaxOrder; ++k) sums_[k].merge(other.sums_[k]);
}

double MomentAccumulator::moment(int k) const {
  if (k < 1 || k > kMaxOrder) fail(Errc::out_of_range, "moment order must lie in [1, 4]");
  if (count_ == 0) return 0.0;
  return sums_[k - 1].value() / static_cast<double>(count_);
}

double MomentAccumulator::variance() const {
  const double m = mean();
  return std::max(0.0, moment(2) - m * m);
}

QuantileSketch::QuantileSketch(double relative_accuracy) : accuracy_(relative_accuracy) {
  if (!(relative_accuracy > 0.0 && relative_accuracy < 1.0)) {
    fail(Errc::invalid_argument, "sketch accuracy must lie in (0, 1)");
  }
  log_gamma_ = std::log1p(2.0 * accuracy_ / (1.0 - accuracy_));
}

int QuantileSketch::index(double x) const {
  return static_cast<int>(std::ceil(std::log(x) / log_gamma_));
}

double QuantileSketch::bucket_value(int idx) const {
  // Midpoint in relative terms of (gamma^(i-1), gamma^i].
  return 2.0 * std::exp(log_gamma_ * idx) / (std::exp(log_gamma_) + 1.0);
}

void QuantileSketch::add(double x) {
  if (std::isnan(x) || x < 0.0) fail(Errc::invalid_argument, "sketch accepts non-negative values");
  ++count_;
  if (x == 0.0 || x < std::numeric_limits<double>::min()) {
    ++zeros_;
    return;
  }
  const int i = index(x);
  if (buckets_.empty()) {
    offset_ = i;
    buckets_.assign(1, 0);
  } else if (i < offset_) {
    buckets_.insert(buckets_.begin(), static_cast<std::size_t>(offset_ - i), 0);
    offset_ = i;
  } else if (i >= offset_ + static_cast<int>(buckets_.size())) {
    buckets_.resize(static_cast<std::size_t>(i - offset_ + 1), 0);
  }
  ++buckets_[static_cast<std::size_t>(i - offset_)];
}

void QuantileSketch::merge(const QuantileSketch& other) {
  if (other.accuracy_ != accuracy_) fail(Errc::invalid_argument, "sketch accuracies differ");
  count_ += other.count_;
  zeros_ += other.zeros_;
  if (other.buckets_.empty()) return;
  if (buckets_.empty()) {
    offset_ = other.offset_;
    buckets_ = other.buckets_;
    return;
  }
  const int lo = std::min(offset_, other.offset_);
  const int hi = std::max(offset_ + static_cast<int>(buckets_.size()),
                          other.offset_ + static_cast<int>(other.buckets_.size()));
  std::vector<std::uint64_t> merged(static_cast<std::size_t>(hi - lo), 0);
  for (std::size_t i = 0; i < buckets_.size(); ++i) merged[i + offset_ - lo] += buckets_[i];
  for (std::size_t i = 0; i < other.buckets_.size(); ++i) {
    merged[i + other.offset_ - lo] += other.buckets_[i];
  }
  buckets_ = std::move(merged);
  offset_ = lo;
}

double QuantileSketch::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) fail(Errc::out_of_range, "quantile level must lie in [0, 1]");
  if (count_ == 0) fail(Errc::invalid_argument, "empty sketch");
  const double rank = q * static_cast<double>(count_ - 1);
  auto seen = static_cast<double>(zeros_);
  if (rank < seen) return 0.0;
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    seen += static_cast<double>(buckets_[i]);
    if (rank < seen) return bucket_value(offset_ + static_cast<int>(i));
  }
  return bucket_value(offset_ + static_cast<int>(buckets_.size()) - 1);
}

double QuantileSketch::cdf(double x) const {
  if (count_ == 0) fail(Errc::invalid_argument, "empty sketch");
  if (x < 0.0) return 0.0;
  std::uint64_t below = zeros_;
  if (x > 0.0 && !buckets_.empty()) {
    const int last = index(x) - offset_;
    const int end = std::min(last, static_cast<int>(buckets_.size()) - 1);
    for (int i = 0; i <= end; ++i) below += buckets_[static_cast<std::size_t>(i)];
  }
  return static_cast<double>(below) / static_cast<double>(count_);
}

const char* to_string(SimulationMode mode) noexcept {
  return mode == SimulationMode::exact ? "exact" : "approx";
}

SimulationMode parse_simulation_mode(const char* text) {
  if (std::strcmp(text, "exact") == 0) return SimulationMode::exact;
  if (std::strcmp(text, "approx") == 0) return SimulationMode::approx;
  fail(Errc::invalid_argument, std::string("unknown simulation mode: ") + text);
}

namespace {

constexpr std::size_t kDrawsPerBlock = std::size_t{1} << 16;

class GainSampler {
 public:
  GainSampler(const Scenario& scenario, SimulationMode mode)
      : scenario_(scenario),
        mode_(mode),
        params_(scenario.params()),
        shadowing_(params_.mu_nat(), params_.sigma_nat()) {
    params_.validate();
    if (mode == SimulationMode::exact) {
      if (scenario.interferer_aps().size() != scenario.interferer_count()) {
        fail(Errc::invalid_argument, "exact simulation needs a geometry-based scenario");
      }
      aps_.assign(scenario.interferer_aps().begin(), scenario.interferer_aps().end());
    }
  }

  double operator()(Rng& rng) {
    const bool shadowed = params_.sigma_db > 0.0;
    double g = 0.0;
    if (mode_ == SimulationMode::exact) {
      const double u1 = uniform_open(rng);
      const double u2 = uniform_open(rng);
      const Point2 p = sector_point_from_unit(scenario_.layout(), u1, u2);
      for (std::size_t ap : aps_) {
        double term = normalized_pathloss(params_, scenario_.layout().distance_to(ap, p)) *
                      sample_rayleigh(rng);
        if (shadowed) term *= std::exp(shadowing_(rng));
        g += term;
      }
    } else {
      for (double lambda : scenario_.lambdas()) {
        double term = lambda * sample_rayleigh(rng);
        if (shadowed) term *= std::exp(shadowing_(rng));
        g += term;
      }
    }
    return g;
  }

 private:
  const Scenario& scenario_;
  SimulationMode mode_;
  PropagationParams params_;
  std::normal_distribution<double> shadowing_;
  std::vector<std::size_t> aps_;
};

}  // namespace

SimulationResult simulate(const Scenario& scenario, SimulationMode mode,
                          const SimulationConfig& config) {
  if (config.draws < 1) fail(Errc::invalid_argument, "at least one draw is required");
  const bool keep = config.draws <= config.keep_samples_up_to;
  const std::size_t blocks = (config.draws + kDrawsPerBlock - 1) / kDrawsPerBlock;

  struct Partial {
    MomentAccumulator moments;
    QuantileSketch sketch;
  };
  std::vector<Partial> partials(blocks, Partial{{}, QuantileSketch(config.sketch_accuracy)});
  SimulationResult result{mode, {}, QuantileSketch(config.sketch_accuracy), {}};
  if (keep) result.samples.resize(config.draws);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    GainSampler sampler(scenario, mode);
    for (std::size_t b = next++; b < blocks; b = next++) {
      Rng rng = make_stream(config.seed, b);
      const std::size_t first = b * kDrawsPerBlock;
      const std::size_t last = std::min(config.draws, first + kDrawsPerBlock);
      auto& part = partials[b];
      for (std::size_t i = first; i < last; ++i) {
        const double g = sampler(rng);
        part.moments.add(g);
        part.sketch.add(g);
        if (keep) result.samples[i] = g;
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(config.threads, blocks)));
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
  for (const auto& part : partials) {
    result.moments.merge(part.moments);
    result.sketch.merge(part.sketch);
  }
  return result;
}

std::vector<double> simulate_exact(const Scenario& scenario, std::size_t draws, Rng& rng) {
  GainSampler sampler(scenario, SimulationMode::exact);
  std::vector<double> out(draws);
  for (auto& g : out) g = sampler(rng);
  return out;
}

std::vector<double> simulate_approx(const Scenario& scenario, std::size_t draws, Rng& rng) {
  GainSampler sampler(scenario, SimulationMode::approx);
  std::vector<double> out(draws);
  for (auto& g : out) g = sampler(rng);
  return out;
}

}  // namespace icistat
