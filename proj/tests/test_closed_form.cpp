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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "icistat/closed_form.hpp"
#include "icistat/error.hpp"
#include "icistat/numeric.hpp"
#include "icistat/propagation.hpp"
#include "icistat/scenario.hpp"

using namespace icistat;

TEST_CASE("single exponential") {
  const HypoExponential h({1.0});
  for (double x : {0.0, 0.3, 1.0, 4.0, 20.0}) {
    CHECK(h.cdf(x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-14));
    CHECK(h.pdf(x) == doctest::Approx(std::exp(-x)).epsilon(1e-14));
  }
}

TEST_CASE("two exponentials by partial fractions") {
  const HypoExponential h({2.0, 1.0});
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(h.cdf(x) == doctest::Approx(1.0 - 2.0 * std::exp(-x / 2.0) + std::exp(-x)));
  }
  CHECK(h.mean() == doctest::Approx(3.0));
}

TEST_CASE("cdf is a distribution and the pdf integrates to the mean") {
  ScenarioConfig c;
  c.reuse = Reuse::FR3;
  const auto s = Scenario::build(c);
  const HypoExponential h({s.lambdas().begin(), s.lambdas().end()});
  double prev = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double f = h.cdf(0.05 * i);
    CHECK(f >= prev - 1e-15);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    prev = f;
  }
  const auto m = integrate([&](double x) { return x * h.pdf(x); }, 0.0, 200.0, 0.0, 1e-12);
  CHECK(m.value == doctest::Approx(1.857).epsilon(1e-3));
  const auto d = integrate([&](double x) { return h.pdf(x); }, 0.0, 3.0, 0.0, 1e-12);
  CHECK(d.value == doctest::Approx(h.cdf(3.0)).epsilon(1e-10));
}

TEST_CASE("nearly equal lambdas are perturbed, not divided by zero") {
  const HypoExponential h({1.0, 1.0 + 1e-13});
  CHECK(h.perturbed());
  CHECK_FALSE(h.warnings().empty());
  for (double x : {0.5, 1.0, 3.0}) {
    const double gamma2 = 1.0 - std::exp(-x) * (1.0 + x);
    CHECK(h.cdf(x) == doctest::Approx(gamma2).epsilon(1e-5));
  }
}

TEST_CASE("single interferer moments") {
  CHECK(single_moment(1, 0.0) == 1.0);
  CHECK(single_moment(1, 12.0) == doctest::Approx(1.0));
  CHECK(single_moment(2, 0.0) == doctest::Approx(2.0));
  CHECK(single_moment(3, 0.0) == doctest::Approx(6.0));
  CHECK(std::abs(single_moment(2, 12.0) - 4.138e3) / 4.138e3 < 1e-3);
  CHECK(std::abs(single_moment(3, 12.0) - 53.127e9) / 53.127e9 < 1e-3);
  CHECK_THROWS_AS(single_moment(0, 1.0), Error);
}

TEST_CASE("multi-index enumeration") {
  for (auto [n, k] : std::vector<std::pair<std::size_t, int>>{{3, 2}, {4, 3}, {1, 5}, {5, 1}}) {
    std::map<std::vector<int>, int> seen;
    for_each_multi_index(n, k, [&](std::span<const int> a) {
      int sum = 0;
      for (int v : a) sum += v;
      CHECK(sum == k);
      ++seen[std::vector<int>(a.begin(), a.end())];
    });
    CHECK(seen.size() == multi_index_count(n, k));
    for (const auto& [idx, times] : seen) CHECK(times == 1);
  }
  CHECK(multi_index_count(3, 2) == 6);
  CHECK(multi_index_count(4, 3) == 20);
}

TEST_CASE("total gain moments") {
  ScenarioConfig c;
  const auto fr1 = Scenario::build(c);
  CHECK(std::abs(multi_moment(1, fr1.lambdas(), 0.0) - 17.25) / 17.25 < 1e-3);
  c.reuse = Reuse::FR3;
  const auto fr3 = Scenario::build(c);
  CHECK(std::abs(multi_moment(1, fr3.lambdas(), 12.0) - 1.857) / 1.857 < 1e-3);

  const std::vector<double> one{1.0};
  CHECK(multi_moment(2, one, 12.0) == doctest::Approx(single_moment(2, 12.0)));

  const std::vector<double> two{1.7, 0.4};
  for (double sdb : {0.0, 6.0, 12.0}) {
    const double s = sdb / kXi;
    const double expect =
        2.0 * (1.7 * 1.7 + 0.4 * 0.4) * std::exp(s * s) + 2.0 * 1.7 * 0.4;
    CHECK(multi_moment(2, two, sdb) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("multi-moment term cap") {
  const std::vector<double> l(18, 1.0);
  CHECK_THROWS_AS(multi_moment(12, l, 6.0, 1000), Error);
  CHECK_NOTHROW(multi_moment(3, l, 6.0, 1140));  // C(20, 3) compositions
  CHECK_THROWS_AS(multi_moment(3, l, 6.0, 1139), Error);
}
