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
#include <iosfwd>
#include <span>
#include <vector>

namespace icistat {

/// Non-uniform partition of the probability axis: interval j = 1..J-1 has
/// length 9 * 10^-j, the last interval takes the remaining 10^-(J-1), and
/// each interval is split into P equal probability cells.
struct PartitionSpec {
  int intervals = 25;
  int points = 900;

  void validate() const;
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(intervals) * static_cast<std::size_t>(points);
  }
  /// Probability length d_j of interval j (1-based).
  double length(int j) const;
  /// Probability carried by each element of interval j: d_j / P.
  double element_probability(int j) const { return length(j) / points; }
  /// Tail probability 1 - F at the lower edge of interval j: 10^-(j-1).
  double upper_tail(int j) const;
  bool operator==(const PartitionSpec&) const = default;
};

/// A probability level kept as both p and 1 - p so that levels within 1e-300
/// of one survive in double precision.
struct ProbabilityLevel {
  double p = 0.5;
  double q = 0.5;
};

/// Probability level of element i (0-based) of interval j (1-based): the
/// midpoint of the i-th of the P equal cells.
ProbabilityLevel partition_level(const PartitionSpec& spec, int j, int i);

/// CDF of G = G_f * G_s for unit-mean exponential fading and unit-mean
/// lognormal shadowing:
///   F(x) = int_0^inf Q(10 log10(u/x) / sigma_dB - sigma_dB / (2 xi)) e^-u du.
double single_cdf(double sigma_db, double x);
/// 1 - F(x), integrated directly so far-tail values keep full relative accuracy.
double single_sf(double sigma_db, double x);
double single_pdf(double sigma_db, double x);

/// Quantile of single_cdf for p in (0, 1).
double invert_cdf(double sigma_db, double p);
/// Quantile at tail probability q = 1 - p, q in (0, 1).
double invert_sf(double sigma_db, double q);
double invert_level(double sigma_db, ProbabilityLevel level);

/// Weighted ensemble of single-interferer gains laid out interval by
/// interval; element probabilities are d_j / P.
class TypicalSet {
 public:
  TypicalSet(PartitionSpec spec, double sigma_db, std::vector<double> amplitudes);

  const PartitionSpec& spec() const noexcept { return spec_; }
  double sigma_db() const noexcept { return sigma_db_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }
  std::span<const double> amplitudes() const noexcept { return amplitudes_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  /// The P amplitudes of interval j (1-based).
  std::span<const double> interval(int j) const;

  double moment(int k) const;
  /// Weighted empirical CDF: total probability of amplitudes <= x.
  double empirical_cdf(double x) const;

 private:
  PartitionSpec spec_;
  double sigma_db_ = 0.0;
  std::vector<double> amplitudes_;
  std::vector<double> probabilities_;
};

TypicalSet build_typical_set(double sigma_db, const PartitionSpec& spec = {},
                             unsigned threads = 1);

/// Binary cache format: "ICTS", u32 version, f64 sigma_dB, u32 J, u32 P,
/// u64 count, count x f64 amplitudes; all little-endian.
inline constexpr std::uint32_t kTypicalSetFormatVersion = 1;
void write_typical_set(std::ostream& out, const TypicalSet& set);
TypicalSet read_typical_set(std::istream& in);

}  // namespace icistat
