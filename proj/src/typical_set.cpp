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

#include "icistat/typical_set.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "binary_io.hpp"
#include "icistat/error.hpp"
#include "icistat/numeric.hpp"
#include "icistat/propagation.hpp"

namespace icistat {

namespace {

constexpr double kRelTol = 1e-13;
// e^{t - e^t} underflows past this.
const double kUpperLog = std::log(800.0);

void check_sigma(double sigma_db) {
  if (!(sigma_db >= 0.0) || !std::isfinite(sigma_db)) {
    fail(Errc::invalid_argument, "sigma_dB must be non-negative");
  }
}

// Integrals over t = ln u of e^{t - e^t} times a shadowing factor.
// lower: F(x) with Q((t - lx)/s - s/2); upper: 1 - F(x) with Q((lx - t)/s + s/2);
// density: x p(x) with phi((lx - t)/s + s/2) / s.
enum class Kind { lower, upper, density };

double shadowed_integral(Kind kind, double s, double lx) {
  const double t_star = lx + 0.5 * s * s;
  const double t_lo = std::min(t_star, 0.0) - 50.0 - 12.0 * s;
  auto integrand = [&](double t) {
    const double base = std::exp(t - std::exp(t));
    if (base == 0.0) return 0.0;
    switch (kind) {
      case Kind::lower:
        return base * gaussian_q((t - lx) / s - 0.5 * s);
      case Kind::upper:
        return base * gaussian_q((lx - t) / s + 0.5 * s);
      case Kind::density:
        return base * gaussian_pdf((lx - t) / s + 0.5 * s) / s;
    }
    return 0.0;
  };
  const auto r = integrate(integrand, t_lo, kUpperLog, std::numeric_limits<double>::min(),
                           kRelTol, {t_star - s, t_star, t_star + s, 0.0});
  if (!r.converged && r.error > 1e-10 * std::abs(r.value)) {
    fail(Errc::numerical_failure, "single-interferer cdf quadrature failed (residual " +
                                      std::to_string(r.error) + ")");
  }
  return r.value;
}

// ln F (or -ln(1 - F)) and its derivative with respect to ln x.
struct LogValue {
  double value;
  double slope;
};

LogValue log_branch(bool upper, double s, double y) {
  const double v = shadowed_integral(upper ? Kind::upper : Kind::lower, s, y);
  const double d = shadowed_integral(Kind::density, s, y);
  if (upper) return {-std::log(v), d / v};
  return {std::log(v), d / v};
}

}  // namespace

void PartitionSpec::validate() const {
  if (intervals < 1) fail(Errc::invalid_argument, "partition needs at least one interval");
  if (points < 1) fail(Errc::invalid_argument, "partition needs at least one point per interval");
  if (intervals > 300) fail(Errc::invalid_argument, "partition deeper than double precision");
}

double PartitionSpec::length(int j) const {
  if (j < 1 || j > intervals) fail(Errc::out_of_range, "interval index out of range");
  if (j == intervals) return std::pow(10.0, -(j - 1));
  return 9.0 * std::pow(10.0, -j);
}

double PartitionSpec::upper_tail(int j) const {
  if (j < 1 || j > intervals) fail(Errc::out_of_range, "interval index out of range");
  return std::pow(10.0, -(j - 1));
}

ProbabilityLevel partition_level(const PartitionSpec& spec, int j, int i) {
  if (i < 0 || i >= spec.points) fail(Errc::out_of_range, "point index out of range");
  const double cell = spec.length(j) / spec.points;
  const double offset = (i + 0.5) * cell;
  if (j == 1) return {offset, 1.0 - offset};
  const double q = spec.upper_tail(j) - offset;
  return {1.0 - q, q};
}

double single_cdf(double sigma_db, double x) {
  check_sigma(sigma_db);
  if (x < 0.0 || std::isnan(x)) fail(Errc::invalid_argument, "x must be non-negative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (sigma_db == 0.0) return -std::expm1(-x);
  const double s = sigma_db / kXi;
  const double lower = shadowed_integral(Kind::lower, s, std::log(x));
  if (lower <= 0.5) return lower;
  return 1.0 - shadowed_integral(Kind::upper, s, std::log(x));
}

double single_sf(double sigma_db, double x) {
  check_sigma(sigma_db);
  if (x < 0.0 || std::isnan(x)) fail(Errc::invalid_argument, "x must be non-negative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (sigma_db == 0.0) return std::exp(-x);
  return shadowed_integral(Kind::upper, sigma_db / kXi, std::log(x));
}

double single_pdf(double sigma_db, double x) {
  check_sigma(sigma_db);
  if (x < 0.0 || std::isnan(x)) fail(Errc::invalid_argument, "x must be non-negative");
  if (sigma_db == 0.0) return std::exp(-x);
  if (x == 0.0 || std::isinf(x)) return 0.0;
  return shadowed_integral(Kind::density, sigma_db / kXi, std::log(x)) / x;
}

double invert_level(double sigma_db, ProbabilityLevel level) {
  check_sigma(sigma_db);
  if (!(level.p > 0.0 && level.q > 0.0 && level.p <= 1.0 && level.q <= 1.0)) {
    fail(Errc::out_of_range, "probability must lie strictly inside (0, 1)");
  }
  const bool upper = level.p > 0.5;
  if (sigma_db == 0.0) return upper ? -std::log(level.q) : -std::log1p(-level.p);

  const double s = sigma_db / kXi;
  // Work in y = ln x on an increasing branch h(y) with target h*.
  const double target = upper ? -std::log(level.q) : std::log(level.p);
  auto h = [&](double y) { return log_branch(upper, s, y); };

  // Start from the unshadowed exponential quantile and expand a bracket.
  double y = std::log(upper ? -std::log(level.q) : -std::log1p(-level.p));
  LogValue hv = h(y);
  double lo = y, hi = y;
  double lo_val = hv.value, hi_val = hv.value;
  double step = 1.0 + s;
  while (lo_val > target) {
    hi = lo;
    hi_val = lo_val;
    lo -= step;
    step *= 2.0;
    lo_val = h(lo).value;
    if (lo < -1e4) fail(Errc::numerical_failure, "quantile bracket search failed");
  }
  step = 1.0 + s;
  while (hi_val < target) {
    lo = hi;
    lo_val = hi_val;
    hi += step;
    step *= 2.0;
    hi_val = h(hi).value;
    if (hi > 1e4) fail(Errc::numerical_failure, "quantile bracket search failed");
  }

  // Safeguarded Newton: take the derivative step when it stays inside the
  // bracket and shrinks it fast enough, otherwise bisect.
  y = std::clamp(y, lo, hi);
  hv = h(y);
  for (int iter = 0; iter < 200; ++iter) {
    const double g = hv.value - target;
    if (g == 0.0) return std::exp(y);
    if (g < 0.0) lo = y; else hi = y;
    double next = (hv.slope > 0.0) ? y - g / hv.slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi) || std::abs(next - y) > 0.5 * (hi - lo)) {
      next = 0.5 * (lo + hi);
    }
    const double moved = std::abs(next - y);
    y = next;
    if (moved <= 1e-14 * std::max(1.0, std::abs(y)) || hi - lo <= 1e-14 * std::max(1.0, std::abs(y))) {
      return std::exp(y);
    }
    hv = h(y);
  }
  fail(Errc::numerical_failure, "quantile iteration did not converge");
}

double invert_cdf(double sigma_db, double p) {
  if (!(p > 0.0 && p < 1.0)) fail(Errc::out_of_range, "probability must lie in (0, 1)");
  return invert_level(sigma_db, {p, 1.0 - p});
}

double invert_sf(double sigma_db, double q) {
  if (!(q > 0.0 && q < 1.0)) fail(Errc::out_of_range, "tail probability must lie in (0, 1)");
  return invert_level(sigma_db, {1.0 - q, q});
}

TypicalSet::TypicalSet(PartitionSpec spec, double sigma_db, std::vector<double> amplitudes)
    : spec_(spec), sigma_db_(sigma_db), amplitudes_(std::move(amplitudes)) {
  spec_.validate();
  if (amplitudes_.size() != spec_.size()) {
    fail(Errc::invalid_argument, "typical set size does not match its partition");
  }
  for (double a : amplitudes_) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      fail(Errc::invalid_argument, "typical set amplitudes must be finite and non-negative");
    }
  }
  probabilities_.reserve(amplitudes_.size());
  for (int j = 1; j <= spec_.intervals; ++j) {
    probabilities_.insert(probabilities_.end(), spec_.points, spec_.element_probability(j));
  }
}

std::span<const double> TypicalSet::interval(int j) const {
  if (j < 1 || j > spec_.intervals) fail(Errc::out_of_range, "interval index out of range");
  return std::span<const double>(amplitudes_)
      .subspan(static_cast<std::size_t>(j - 1) * spec_.points, spec_.points);
}

double TypicalSet::moment(int k) const {
  CompensatedSum sum;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    sum += probabilities_[i] * std::pow(amplitudes_[i], k);
  }
  return sum.value();
}

double TypicalSet::empirical_cdf(double x) const {
  CompensatedSum sum;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (amplitudes_[i] <= x) sum += probabilities_[i];
  }
  return sum.value();
}

TypicalSet build_typical_set(double sigma_db, const PartitionSpec& spec, unsigned threads) {
  check_sigma(sigma_db);
  spec.validate();
  std::vector<double> amplitudes(spec.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int j = static_cast<int>(idx / spec.points) + 1;
      const int i = static_cast<int>(idx % spec.points);
      amplitudes[idx] = invert_level(sigma_db, partition_level(spec, j, i));
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, amplitudes.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (amplitudes.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = std::min(amplitudes.size(), t * chunk);
      const std::size_t e = std::min(amplitudes.size(), b + chunk);
      pool.emplace_back([&, t, b, e] {
        try {
          work(b, e);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }
  return TypicalSet(spec, sigma_db, std::move(amplitudes));
}

void write_typical_set(std::ostream& out, const TypicalSet& set) {
  out.write("ICTS", 4);
  binary::put_u32(out, kTypicalSetFormatVersion);
  binary::put_f64(out, set.sigma_db());
  binary::put_u32(out, static_cast<std::uint32_t>(set.spec().intervals));
  binary::put_u32(out, static_cast<std::uint32_t>(set.spec().points));
  binary::put_u64(out, set.size());
  for (double a : set.amplitudes()) binary::put_f64(out, a);
  if (!out) fail(Errc::io_error, "failed to write typical set");
}

TypicalSet read_typical_set(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "ICTS") fail(Errc::parse_error, "not a typical set file");
  const auto version = binary::get_u32(in);
  if (version != kTypicalSetFormatVersion) {
    fail(Errc::cache_mismatch, "typical set format version " + std::to_string(version) +
                                   " is not supported");
  }
  const double sigma = binary::get_f64(in);
  PartitionSpec spec;
  spec.intervals = static_cast<int>(binary::get_u32(in));
  spec.points = static_cast<int>(binary::get_u32(in));
  spec.validate();
  const auto count = binary::get_u64(in);
  if (count != spec.size()) fail(Errc::parse_error, "typical set count does not match partition");
  std::vector<double> amplitudes(count);
  for (auto& a : amplitudes) a = binary::get_f64(in);
  return TypicalSet(spec, sigma, std::move(amplitudes));
}

}  // namespace icistat
