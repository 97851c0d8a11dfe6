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
#include <string>
#include <vector>

namespace icistat {

/// Sum of independent exponentials with distinct means lambda_n:
///   F(x) = 1 - sum_n A_n exp(-x / lambda_n),
///   A_n  = lambda_n^(N-1) / prod_{j != n} (lambda_n - lambda_j).
/// Near-equal means (relative gap below 1e-9) are split by nudging the smaller
/// one down by a relative 1e-8; a warning is recorded when that happens.
class HypoExponential {
 public:
  explicit HypoExponential(std::vector<double> lambdas);

  double cdf(double x) const;
  double pdf(double x) const;
  double mean() const noexcept;

  std::span<const double> lambdas() const noexcept { return lambdas_; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  bool perturbed() const noexcept { return !warnings_.empty(); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  std::vector<double> lambdas_;
  std::vector<double> coeffs_;
  std::vector<std::string> warnings_;
};

/// k-th raw moment of a unit-mean exponential times unit-mean lognormal
/// shadowing: k! exp(k(k-1) sigma^2 / 2), sigma = sigma_db / xi.
double single_moment(int k, double sigma_db);

/// Number of multi-indices of N non-negative components summing to k.
std::uint64_t multi_index_count(std::size_t n, int k);

/// Visits every multi-index a with |a| = k over n components in
/// colexicographic order without materialising the list. The callback
/// receives a span of the n exponents.
template <typename Visitor>
void for_each_multi_index(std::size_t n, int k, Visitor&& visit);

inline constexpr std::uint64_t kDefaultMomentTermCap = 100'000'000;

/// k-th raw moment of sum_n lambda_n G_f,n G_s,n for independent unit-mean
/// exponential fading and lognormal shadowing:
///   k! sum_{|a|=k} lambda^a exp(sigma^2/2 (-k + sum a_n^2)).
double multi_moment(int k, std::span<const double> lambdas, double sigma_db,
                    std::uint64_t max_terms = kDefaultMomentTermCap);

// ---------------------------------------------------------------------------

template <typename Visitor>
void for_each_multi_index(std::size_t n, int k, Visitor&& visit) {
  if (n == 0) return;
  std::vector<int> a(n, 0);
  a[0] = k;
  for (;;) {
    visit(std::span<const int>(a));
    // Colex successor: find the first nonzero component a[i] with i < n - 1,
    // move one unit to a[i + 1] and gather the remainder back into a[0].
    std::size_t i = 0;
    while (i < n && a[i] == 0) ++i;
    if (i >= n - 1) return;
    const int carry = a[i] - 1;
    a[i] = 0;
    a[i + 1] += 1;
    a[0] = carry;
  }
}

}  // namespace icistat
