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
#include <span>
#include <vector>

#include "icistat/geometry.hpp"
#include "icistat/propagation.hpp"

namespace icistat {

/// User-facing scenario knobs. Defaults reproduce the reference urban setup:
/// R = 700 m, gamma = 3.2, d_ref = 2R, no shadowing, full reuse, seed 42.
struct ScenarioConfig {
  double cell_radius = 700.0;
  double gamma = 3.2;
  double d_ref_multiplier = 2.0;
  double sigma_db = 0.0;
  Reuse reuse = Reuse::FR1;
  std::uint64_t seed = 42;

  PropagationParams params() const noexcept {
    return {gamma, d_ref_multiplier * cell_radius, sigma_db};
  }
  bool operator==(const ScenarioConfig&) const = default;
};

/// A configured network together with its interferers' average path losses,
/// ordered by decreasing lambda.
class Scenario {
 public:
  static Scenario build(const ScenarioConfig& config);
  /// Scenario with caller-supplied lambdas (sorted internally), for studies
  /// that do not start from the hexagonal geometry.
  static Scenario from_lambdas(const ScenarioConfig& config, std::vector<double> lambdas);

  const ScenarioConfig& config() const noexcept { return config_; }
  const NetworkLayout& layout() const noexcept { return layout_; }
  PropagationParams params() const noexcept { return config_.params(); }
  Reuse reuse() const noexcept { return config_.reuse; }
  double sigma_db() const noexcept { return config_.sigma_db; }

  std::span<const double> lambdas() const noexcept { return lambdas_; }
  /// AP index of each lambda; empty for from_lambdas scenarios.
  std::span<const std::size_t> interferer_aps() const noexcept { return aps_; }
  std::size_t interferer_count() const noexcept { return lambdas_.size(); }
  /// Exact mean interference gain, the sum of the lambdas.
  double exact_mean() const noexcept;

  /// Same network and lambdas with a different shadowing level.
  Scenario with_sigma_db(double sigma_db) const;

 private:
  ScenarioConfig config_;
  NetworkLayout layout_;
  std::vector<double> lambdas_;
  std::vector<std::size_t> aps_;
};

}  // namespace icistat
