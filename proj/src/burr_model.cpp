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

#include "icistat/burr_model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "icistat/error.hpp"
#include "icistat/numeric.hpp"

namespace icistat {

namespace {

using Coeffs6 = std::array<double, 6>;
using Coeffs5 = std::array<double, 5>;

// rows eta, alpha, k, beta
constexpr std::array<Coeffs6, 4> kFr1Laws{{
    {4.0, 0.0, 1.0, 1.0, 1.0, 1.0},
    {0.93, 0.87, 65.0, 1.0, 7.2, 3.2},
    {0.65, 2.18, 3.3, 0.39, 4.75, 2.06},
    {0.04, 16.44, 13.45, 9.0, 6.35, 2.56},
}};
constexpr std::array<Coeffs6, 4> kFr3Laws{{
    {0.0, 1.0, 1.0, 1.0, 1.0, 1.0},
    {0.38, 0.94, 39.90, 2.00, 8.30, 3.00},
    {0.0, 12.70, 2.35, 2.07, 11.00, 6.47},
    {1.81, 24.35, 3.60, 2.77, 1.77, 1.31},
}};
constexpr Coeffs5 kFr1Truncation{61.56, 6.06, 1.84, 5.27, 2.51};
constexpr Coeffs5 kFr3Truncation{1.71, 5.10, 1.89, 6.40, 2.30};

void check_sigma(double sigma_db) {
  if (!(sigma_db >= 0.0 && sigma_db <= 12.0)) {
    fail(Errc::out_of_range, "empirical laws are defined for sigma_db in [0, 12] only, got " +
                                 std::to_string(sigma_db));
  }
}

bool truncated(const BurrModel& m) { return m.x_t > 0.0 && std::isfinite(m.x_t); }

// log of 1 - (1+z)^-k
double log_inner(const BurrModel& m, double z) {
  return std::log(-std::expm1(-m.k * std::log1p(z)));
}

}  // namespace

void BurrModel::validate() const {
  const std::pair<const char*, double> params[] = {
      {"eta", eta}, {"alpha", alpha}, {"k", k}, {"beta", beta}};
  for (const auto& [name, v] : params) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(Errc::invalid_parameter,
           std::string("Burr parameter ") + name + " must be positive, got " + std::to_string(v));
    }
  }
  if (x_t < 0.0) fail(Errc::invalid_parameter, "truncation point must be non-negative");
  if (!(A >= 1.0)) fail(Errc::invalid_parameter, "normalisation A must be >= 1");
}

BurrModel BurrModel::truncated_at(double eta, double alpha, double k, double beta, double x_t) {
  BurrModel m{eta, alpha, k, beta, 0.0, 1.0};
  m.validate();
  if (!(x_t > 0.0)) fail(Errc::invalid_parameter, "truncation point must be positive");
  const double f = burr_cdf(m, x_t);
  if (!(f > 0.0)) fail(Errc::numerical_failure, "cdf vanishes at the truncation point");
  m.x_t = x_t;
  m.A = 1.0 / f;
  return m;
}

double burr_cdf(const BurrModel& m, double x) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double z = std::pow(x / m.beta, m.alpha);
  return std::exp(m.eta * log_inner(m, z));
}

double burr_pdf(const BurrModel& m, double x) {
  if (!(x > 0.0) || std::isinf(x)) return 0.0;
  const double z = std::pow(x / m.beta, m.alpha);
  const double lp = std::log(m.eta) + (m.eta - 1.0) * log_inner(m, z) + std::log(m.k) -
                    (m.k + 1.0) * std::log1p(z) + std::log(m.alpha) + std::log(z) - std::log(x);
  return std::exp(lp);
}

double burr_quantile(const BurrModel& m, double p) {
  if (!(p >= 0.0 && p < 1.0)) fail(Errc::out_of_range, "quantile level must lie in [0, 1)");
  if (p == 0.0) return 0.0;
  const double inner = std::exp(std::log(p) / m.eta);
  const double z = std::expm1(-std::log1p(-inner) / m.k);
  return m.beta * std::pow(z, 1.0 / m.alpha);
}

double truncated_cdf(const BurrModel& m, double x) {
  if (truncated(m) && x >= m.x_t) return 1.0;
  return std::min(1.0, m.A * burr_cdf(m, x));
}

double truncated_pdf(const BurrModel& m, double x) {
  if (truncated(m) && x > m.x_t) return 0.0;
  return m.A * burr_pdf(m, x);
}

double truncated_quantile(const BurrModel& m, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(Errc::out_of_range, "quantile level must lie in [0, 1]");
  if (!truncated(m)) {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return burr_quantile(m, p);
  }
  if (p == 1.0) return m.x_t;
  return std::min(m.x_t, burr_quantile(m, p / m.A));
}

namespace {

// Integral over x in (0, x_t] of x^power * A * p(x), with x = e^s.
double truncated_integral(const BurrModel& m, int power) {
  const double upper = truncated(m) ? std::log(m.x_t) : std::log(m.beta) + 60.0 / m.alpha;
  // Below s_lo the mass is F(e^s_lo), far under double resolution.
  const double lower = std::log(m.beta) - 60.0 / (m.alpha * m.eta);
  auto f = [&](double s) {
    const double x = std::exp(s);
    return std::pow(x, power + 1) * truncated_pdf(m, x);
  };
  std::vector<double> breaks;
  const double lb = std::log(m.beta);
  for (double b : {lb - 2.0, lb, lb + 2.0}) {
    if (b > lower && b < upper) breaks.push_back(b);
  }
  const auto r = integrate(f, std::min(lower, upper - 1.0), upper, 0.0, 1e-12, breaks, 4000);
  if (!r.converged) fail(Errc::not_converged, "truncated Burr integral did not converge");
  return r.value;
}

}  // namespace

double truncated_mass(const BurrModel& m) { return truncated_integral(m, 0); }
double truncated_mean(const BurrModel& m) { return truncated_integral(m, 1); }

std::vector<double> sample_model(const BurrModel& m, Rng& rng, std::size_t count) {
  m.validate();
  std::vector<double> out(count);
  const double top = truncated(m) ? 1.0 / m.A : 1.0;
  for (auto& x : out) {
    x = burr_quantile(m, top * uniform_open(rng));
    if (truncated(m)) x = std::min(x, m.x_t);
  }
  return out;
}

const char* to_string(BurrParam p) {
  switch (p) {
    case BurrParam::eta: return "eta";
    case BurrParam::alpha: return "alpha";
    case BurrParam::k: return "k";
    case BurrParam::beta: return "beta";
  }
  return "?";
}

double empirical_param(BurrParam which, Reuse reuse, double sigma_db) {
  check_sigma(sigma_db);
  const auto& a = (reuse == Reuse::FR1 ? kFr1Laws : kFr3Laws)[static_cast<int>(which)];
  const double s = sigma_db;
  const double r3 = s / a[2];
  const double middle = (1.0 - r3) / std::pow(1.0 + std::pow(r3, a[3]), 1.0 / a[3]);
  const double damp = 1.0 / (1.0 + std::pow(s / a[4], a[5]));
  return a[0] + a[1] * middle * damp;
}

double truncation_point(Reuse reuse, double sigma_db) {
  check_sigma(sigma_db);
  const auto& a = reuse == Reuse::FR1 ? kFr1Truncation : kFr3Truncation;
  const double g = (sigma_db - a[3]) / a[4];
  return a[0] * std::exp(std::pow(sigma_db / a[1], a[2])) * std::exp(std::exp(-g * g));
}

BurrModel model_for(Reuse reuse, double sigma_db) {
  const double eta = empirical_param(BurrParam::eta, reuse, sigma_db);
  const double alpha = empirical_param(BurrParam::alpha, reuse, sigma_db);
  const double k = empirical_param(BurrParam::k, reuse, sigma_db);
  const double beta = empirical_param(BurrParam::beta, reuse, sigma_db);
  try {
    return BurrModel::truncated_at(eta, alpha, k, beta, truncation_point(reuse, sigma_db));
  } catch (const Error& e) {
    if (e.code() != Errc::invalid_parameter) throw;
    fail(Errc::invalid_parameter, std::string(e.what()) + " (" + to_string(reuse) +
                                      ", sigma_db " + std::to_string(sigma_db) + ")");
  }
}

ModelReport model_report(const Scenario& scenario, double mean_tolerance) {
  ModelReport r;
  r.model = model_for(scenario.reuse(), scenario.sigma_db());
  r.truncated_mean = truncated_mean(r.model);
  r.target_mean = scenario.exact_mean();
  r.relative_deviation = (r.truncated_mean - r.target_mean) / r.target_mean;
  r.within_tolerance = std::abs(r.relative_deviation) <= mean_tolerance;
  return r;
}

}  // namespace icistat
