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

#include "icistat/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "icistat/error.hpp"
#include "icistat/numeric.hpp"
#include "icistat/propagation.hpp"

namespace icistat {

namespace {

constexpr double kDegenerateGap = 1e-9;
constexpr double kDegenerateNudge = 1e-8;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

HypoExponential::HypoExponential(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) fail(Errc::invalid_argument, "at least one lambda is required");
  for (double l : lambdas_) {
    if (!(l > 0.0) || !std::isfinite(l)) fail(Errc::invalid_argument, "lambdas must be positive");
  }
  const std::size_t n = lambdas_.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lambdas_[a] > lambdas_[b]; });
  for (std::size_t r = 1; r < n; ++r) {
    const double prev = lambdas_[order[r - 1]];
    double& cur = lambdas_[order[r]];
    if (prev - cur < kDegenerateGap * prev) {
      const double old = cur;
      cur = prev * (1.0 - kDegenerateNudge);
      warnings_.push_back("lambda " + std::to_string(old) +
                          " nearly equals another; perturbed by a relative 1e-8");
    }
  }

  coeffs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // lambda_i^(N-1) / prod (lambda_i - lambda_j) = prod lambda_i / (lambda_i - lambda_j)
    double a = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) a *= lambdas_[i] / (lambdas_[i] - lambdas_[j]);
    }
    coeffs_[i] = a;
  }
}

double HypoExponential::cdf(double x) const {
  if (x < 0.0 || std::isnan(x)) fail(Errc::invalid_argument, "x must be non-negative");
  if (std::isinf(x)) return 1.0;
  CompensatedSum tail;
  for (std::size_t i = 0; i < lambdas_.size(); ++i) {
    tail += coeffs_[i] * std::exp(-x / lambdas_[i]);
  }
  return std::clamp(1.0 - tail.value(), 0.0, 1.0);
}

double HypoExponential::pdf(double x) const {
  if (x < 0.0 || std::isnan(x)) fail(Errc::invalid_argument, "x must be non-negative");
  if (std::isinf(x)) return 0.0;
  CompensatedSum density;
  for (std::size_t i = 0; i < lambdas_.size(); ++i) {
    density += coeffs_[i] / lambdas_[i] * std::exp(-x / lambdas_[i]);
  }
  return std::max(density.value(), 0.0);
}

double HypoExponential::mean() const noexcept {
  CompensatedSum s;
  for (double l : lambdas_) s += l;
  return s.value();
}

double single_moment(int k, double sigma_db) {
  if (k < 1) fail(Errc::invalid_argument, "moment order must be at least 1");
  if (!(sigma_db >= 0.0) || !std::isfinite(sigma_db)) {
    fail(Errc::invalid_argument, "sigma_dB must be non-negative");
  }
  const double s = sigma_db / kXi;
  return factorial(k) * std::exp(0.5 * k * (k - 1) * s * s);
}

std::uint64_t multi_index_count(std::size_t n, int k) {
  if (n == 0 || k < 0) return 0;
  // C(k + n - 1, k), saturating.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = n - 1 + static_cast<std::uint64_t>(i);
    if (c > kMax / num) return kMax;
    c = c * num / static_cast<std::uint64_t>(i);
  }
  return c;
}

double multi_moment(int k, std::span<const double> lambdas, double sigma_db,
                    std::uint64_t max_terms) {
  if (k < 1) fail(Errc::invalid_argument, "moment order must be at least 1");
  if (lambdas.empty()) fail(Errc::invalid_argument, "at least one lambda is required");
  if (!(sigma_db >= 0.0) || !std::isfinite(sigma_db)) {
    fail(Errc::invalid_argument, "sigma_dB must be non-negative");
  }
  const std::uint64_t terms = multi_index_count(lambdas.size(), k);
  if (terms > max_terms) {
    fail(Errc::out_of_range, "moment enumeration needs " + std::to_string(terms) +
                                 " terms, above the cap of " + std::to_string(max_terms));
  }
  const double half_var = 0.5 * (sigma_db / kXi) * (sigma_db / kXi);
  CompensatedSum sum;
  for_each_multi_index(lambdas.size(), k, [&](std::span<const int> a) {
    double term = 1.0;
    int squares = 0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      for (int p = 0; p < a[n]; ++p) term *= lambdas[n];
      squares += a[n] * a[n];
    }
    sum += term * std::exp(half_var * (squares - k));
  });
  return factorial(k) * sum.value();
}

}  // namespace icistat
