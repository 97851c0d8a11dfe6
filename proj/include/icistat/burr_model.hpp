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
#include <string>
#include <vector>

#include "icistat/geometry.hpp"
#include "icistat/rng.hpp"
#include "icistat/scenario.hpp"

namespace icistat {

/// Modified Burr XII law F(x) = (1 - (1 + (x/beta)^alpha)^-k)^eta, truncated
/// at x_t and renormalised by A = 1/F(x_t).
struct BurrModel {
  double eta = 1.0;
  double alpha = 1.0;
  double k = 1.0;
  double beta = 1.0;
  double x_t = 0.0;  ///< truncation point, 0 or inf means untruncated
  double A = 1.0;

  /// Throws Errc::invalid_parameter on any non-positive shape or scale.
  void validate() const;
  /// Fills x_t and A = 1/F(x_t).
  static BurrModel truncated_at(double eta, double alpha, double k, double beta, double x_t);
};

double burr_cdf(const BurrModel& m, double x);
double burr_pdf(const BurrModel& m, double x);
/// Untruncated inverse cdf, p in [0, 1).
double burr_quantile(const BurrModel& m, double p);

double truncated_cdf(const BurrModel& m, double x);
double truncated_pdf(const BurrModel& m, double x);
/// Inverse of the truncated cdf, p in [0, 1].
double truncated_quantile(const BurrModel& m, double p);
/// Integral of A*p over [0, x_t].
double truncated_mass(const BurrModel& m);
double truncated_mean(const BurrModel& m);

std::vector<double> sample_model(const BurrModel& m, Rng& rng, std::size_t count);

enum class BurrParam { eta, alpha, k, beta };
const char* to_string(BurrParam p);

/// Empirical sigma laws, sigma_db in [0, 12].
double empirical_param(BurrParam which, Reuse reuse, double sigma_db);
double truncation_point(Reuse reuse, double sigma_db);

struct ModelReport {
  BurrModel model;
  double truncated_mean = 0.0;
  double target_mean = 0.0;
  double relative_deviation = 0.0;
  bool within_tolerance = false;  ///< |relative_deviation| <= mean_tolerance
};

inline constexpr double kModelMeanTolerance = 0.10;

/// Assembles the model from the empirical laws. Non-positive parameters
/// raise Errc::invalid_parameter naming the offending parameter.
BurrModel model_for(Reuse reuse, double sigma_db);
ModelReport model_report(const Scenario& scenario, double mean_tolerance = kModelMeanTolerance);

}  // namespace icistat
