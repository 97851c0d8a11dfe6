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
#include <numbers>
#include <vector>

#include "icistat/geometry.hpp"
#include "icistat/rng.hpp"

namespace icistat {

/// dB <-> neper-like conversion constant 10 / ln(10).
inline constexpr double kXi = 10.0 / std::numbers::ln10;

/// Path loss and shadowing parameters. Shadowing is lognormal with dB mean
/// chosen for a unit-mean linear gain.
struct PropagationParams {
  double gamma = 3.2;    ///< path-loss exponent, > 2
  double d_ref = 1400.0; ///< normalisation distance (m)
  double sigma_db = 0.0; ///< shadowing standard deviation (dB), in [0, 12]

  double mu_db() const noexcept { return -sigma_db * sigma_db / (2.0 * kXi); }
  /// Log-domain standard deviation sigma_db / xi.
  double sigma_nat() const noexcept { return sigma_db / kXi; }
  double mu_nat() const noexcept { return mu_db() / kXi; }

  void validate() const;
};

/// Physical constants of the default scenario. The dimensional factor
/// K = (c / (4 pi f d0))^2 cancels in the normalised gains and is kept only for
/// reference.
struct PhysicalConstants {
  double frequency_hz = 1e9;
  double d0 = 10.0;
  double k_factor() const noexcept;
};

/// (d_ref / r)^gamma.
double normalized_pathloss(const PropagationParams& params, double r);

struct PathlossAverage {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t nodes = 0;
};

/// Average of the normalised path loss from `ap` over the tagged user placed
/// uniformly in the sector. Refines a barycentric centroid grid until the
/// Richardson error estimate falls below rel_tol.
PathlossAverage average_pathloss(const NetworkLayout& layout, const PropagationParams& params,
                                 std::size_t ap, double rel_tol = 1e-4);

struct InterfererLambda {
  std::size_t ap = 0;
  double lambda = 0.0;
};

/// Average path losses of every interferer of a reuse pattern, sorted by
/// decreasing lambda (ties broken by AP index).
std::vector<InterfererLambda> average_pathlosses(const NetworkLayout& layout,
                                                 const PropagationParams& params, Reuse reuse,
                                                 double rel_tol = 1e-4);

/// Unit-mean exponential (Rayleigh power) gain.
double sample_rayleigh(Rng& rng);
/// Unit-mean lognormal shadowing gain; exactly 1 when sigma_db == 0.
double sample_shadowing(const PropagationParams& params, Rng& rng);

}  // namespace icistat
