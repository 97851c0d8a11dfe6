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

#include "icistat/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "icistat/error.hpp"
#include "icistat/numeric.hpp"

namespace icistat {

void PropagationParams::validate() const {
  if (!(gamma > 2.0) || !std::isfinite(gamma)) {
    fail(Errc::invalid_argument, "path-loss exponent gamma must exceed 2");
  }
  if (!(d_ref > 0.0) || !std::isfinite(d_ref)) {
    fail(Errc::invalid_argument, "reference distance must be positive");
  }
  if (!(sigma_db >= 0.0 && sigma_db <= 12.0)) {
    fail(Errc::invalid_argument, "sigma_dB must lie in [0, 12]");
  }
}

double PhysicalConstants::k_factor() const noexcept {
  constexpr double c = 299792458.0;
  const double v = c / (4.0 * std::numbers::pi * frequency_hz * d0);
  return v * v;
}

double normalized_pathloss(const PropagationParams& params, double r) {
  if (!(r > 0.0)) fail(Errc::invalid_argument, "distance must be positive");
  return std::pow(params.d_ref / r, params.gamma);
}

namespace {

// Centroid-rule averages for all requested APs on an m x m subdivision.
std::vector<double> grid_average(const NetworkLayout& layout, const PropagationParams& params,
                                 const std::vector<std::size_t>& aps, std::size_t m) {
  const auto nodes = sector_samples(layout, SamplingScheme::grid, m * m);
  std::vector<CompensatedSum> sums(aps.size());
  for (const auto& node : nodes) {
    const Point2 p = to_cartesian(node.point);
    for (std::size_t i = 0; i < aps.size(); ++i) {
      sums[i] += node.weight * normalized_pathloss(params, layout.distance_to(aps[i], p));
    }
  }
  std::vector<double> out;
  out.reserve(aps.size());
  for (const auto& s : sums) out.push_back(s.value());
  return out;
}

std::vector<PathlossAverage> converged_averages(const NetworkLayout& layout,
                                                const PropagationParams& params,
                                                const std::vector<std::size_t>& aps,
                                                double rel_tol) {
  params.validate();
  // The centroid rule is second order: halving the mesh quarters the error.
  std::size_t m = 128;
  constexpr std::size_t kMaxM = 4096;
  auto coarse = grid_average(layout, params, aps, m);
  for (;;) {
    const std::size_t fine_m = 2 * m;
    auto fine = grid_average(layout, params, aps, fine_m);
    bool ok = true;
    std::vector<PathlossAverage> out(aps.size());
    for (std::size_t i = 0; i < aps.size(); ++i) {
      const double err = std::abs(fine[i] - coarse[i]) / 3.0;
      out[i] = {fine[i], err, fine_m * fine_m};
      if (err > rel_tol * std::abs(fine[i])) ok = false;
    }
    if (ok) return out;
    if (fine_m >= kMaxM) {
      double worst = 0.0;
      for (const auto& r : out) worst = std::max(worst, r.error_estimate / r.value);
      fail(Errc::not_converged,
           "average path loss quadrature did not converge (relative error estimate " +
               std::to_string(worst) + ")");
    }
    m = fine_m;
    coarse = std::move(fine);
  }
}

}  // namespace

PathlossAverage average_pathloss(const NetworkLayout& layout, const PropagationParams& params,
                                 std::size_t ap, double rel_tol) {
  if (ap == 0 || ap >= layout.size()) fail(Errc::out_of_range, "interferer index out of range");
  return converged_averages(layout, params, {ap}, rel_tol).front();
}

std::vector<InterfererLambda> average_pathlosses(const NetworkLayout& layout,
                                                 const PropagationParams& params, Reuse reuse,
                                                 double rel_tol) {
  const auto aps = layout.interferers(reuse);
  const auto avg = converged_averages(layout, params, aps, rel_tol);
  std::vector<InterfererLambda> out;
  out.reserve(aps.size());
  for (std::size_t i = 0; i < aps.size(); ++i) out.push_back({aps[i], avg[i].value});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.lambda > b.lambda;
  });
  return out;
}

double sample_rayleigh(Rng& rng) { return -std::log(uniform_open(rng)); }

double sample_shadowing(const PropagationParams& params, Rng& rng) {
  if (params.sigma_db == 0.0) return 1.0;
  std::normal_distribution<double> normal(params.mu_nat(), params.sigma_nat());
  return std::exp(normal(rng));
}

}  // namespace icistat
