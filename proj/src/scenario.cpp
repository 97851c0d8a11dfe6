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

#include "icistat/scenario.hpp"

#include <algorithm>
#include <functional>

#include "icistat/error.hpp"
#include "icistat/numeric.hpp"

namespace icistat {

Scenario Scenario::build(const ScenarioConfig& config) {
  config.params().validate();
  Scenario s;
  s.config_ = config;
  s.layout_ = NetworkLayout::hexagonal(config.cell_radius);
  for (const auto& il : average_pathlosses(s.layout_, config.params(), config.reuse)) {
    s.lambdas_.push_back(il.lambda);
    s.aps_.push_back(il.ap);
  }
  return s;
}

Scenario Scenario::from_lambdas(const ScenarioConfig& config, std::vector<double> lambdas) {
  config.params().validate();
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) fail(Errc::invalid_argument, "lambdas must be positive");
  }
  Scenario s;
  s.config_ = config;
  s.layout_ = NetworkLayout::hexagonal(config.cell_radius);
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  s.lambdas_ = std::move(lambdas);
  return s;
}

double Scenario::exact_mean() const noexcept {
  CompensatedSum sum;
  for (double l : lambdas_) sum += l;
  return sum.value();
}

Scenario Scenario::with_sigma_db(double sigma_db) const {
  Scenario s = *this;
  s.config_.sigma_db = sigma_db;
  s.config_.params().validate();
  return s;
}

}  // namespace icistat
