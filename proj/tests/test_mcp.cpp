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
#include <sstream>
#include <vector>

#include "icistat/closed_form.hpp"
#include "icistat/error.hpp"
#include "icistat/mcp.hpp"
#include "icistat/numeric.hpp"
#include "icistat/scenario.hpp"

using namespace icistat;

namespace {

// Interval j holds P copies of `value(j)`.
TypicalSet constant_set(PartitionSpec spec, double (*value)(int)) {
  std::vector<double> a;
  for (int j = 1; j <= spec.intervals; ++j) {
    for (int i = 0; i < spec.points; ++i) a.push_back(value(j));
  }
  return TypicalSet(spec, 0.0, a);
}

double interval_mean(const TypicalSet& s, int j) {
  double m = 0.0;
  for (double x : s.interval(j)) m += x;
  return m / static_cast<double>(s.spec().points);
}

}  // namespace

TEST_CASE("correction factors from the reference path losses") {
  ScenarioConfig c;
  const auto fr1 = Scenario::build(c);
  const auto f = correction_factors(fr1.lambdas(), 2, 3);
  CHECK(f.over == doctest::Approx(1.7158).epsilon(2e-4));
  CHECK(f.under == doctest::Approx(0.99928).epsilon(1e-5));
  CHECK(f.alpha == doctest::Approx(1.001001).epsilon(1e-6));
  c.reuse = Reuse::FR3;
  const auto fr3 = Scenario::build(c);
  CHECK(correction_factors(fr3.lambdas(), 2, 3).over == doctest::Approx(1.868).epsilon(5e-4));
}

TEST_CASE("factors tend to one without non-compelled mass") {
  const std::vector<double> l{3.0, 2.0, 1e-14};
  const auto f = correction_factors(l, 2, 3);
  CHECK(f.over == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.under == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(correction_factors(l, 3, 3), Error);
  CHECK_THROWS_AS(correction_factors(l, 0, 3), Error);
}

TEST_CASE("mean preservation identity") {
  Rng rng = make_stream(5, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + bounded(rng, 17);
    std::vector<double> l(n);
    for (auto& v : l) v = 0.01 + 5.0 * uniform_open(rng);
    std::sort(l.rbegin(), l.rend());
    const int m = 1 + static_cast<int>(bounded(rng, static_cast<std::uint32_t>(n - 1)));
    const int loaded = 1 + static_cast<int>(bounded(rng, 24));
    const auto f = correction_factors(l, m, loaded);
    const double a = uniform_open(rng), b = 1.0 - a;
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < n; ++i) (static_cast<int>(i) < m ? head : tail) += l[i];
    const double lhs = a * (f.under * head + f.alpha * tail) + b * f.over * head;
    CHECK(lhs == doctest::Approx(head + tail).epsilon(1e-12));
  }
}

TEST_CASE("block weights of two compelled links over two intervals") {
  const PartitionSpec spec{2, 3};
  const auto set = constant_set(spec, [](int j) { return static_cast<double>(j); });
  const std::vector<Link> links{{&set, 1.0}, {&set, 1.0}};
  Rng rng = make_stream(1, 0);
  const auto panel = combine_compelled(links, {}, 0, rng);
  REQUIRE(panel.blocks() == 4);
  const double expect[4] = {0.81, 0.09, 0.09, 0.01};
  const int combos[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (std::size_t b = 0; b < 4; ++b) {
    CHECK(panel.block_weights[b] == doctest::Approx(expect[b]).epsilon(1e-14));
    CHECK(panel.combos[2 * b] == combos[b][0]);
    CHECK(panel.combos[2 * b + 1] == combos[b][1]);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(panel.amplitudes[3 * b + i] == combos[b][0] + combos[b][1]);
    }
  }
}

TEST_CASE("one point per interval needs no permutation") {
  const auto set = build_typical_set(6.0, {5, 1});
  const std::vector<Link> links{{&set, 2.5}, {&set, 0.7}};
  const CorrectionFactors f{0.9, 1.4, 1.0};
  Rng rng = make_stream(2, 0);
  const auto panel = combine_compelled(links, f, 2, rng);
  REQUIRE(panel.blocks() == 25);
  for (int j1 = 1; j1 <= 5; ++j1) {
    for (int j2 = 1; j2 <= 5; ++j2) {
      const std::size_t b = static_cast<std::size_t>((j1 - 1) * 5 + (j2 - 1));
      const double expect = 2.5 * (j1 <= 2 ? 0.9 : 1.4) * set.interval(j1)[0] +
                            0.7 * (j2 <= 2 ? 0.9 : 1.4) * set.interval(j2)[0];
      CHECK(panel.amplitudes[b] == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("all links compelled reproduces exact moments") {
  for (double sigma : {0.0, 6.0}) {
    const auto set = build_typical_set(sigma, {12, 300});
    const std::vector<Link> links{{&set, 1.3}, {&set, 0.45}};
    Rng rng = make_stream(3, 0);
    const auto panel = combine_compelled(links, {}, 12, rng);
    const std::vector<double> l{1.3, 0.45};
    for (int k = 1; k <= 2; ++k) {
      const double exact = multi_moment(k, l, sigma);
      INFO("sigma " << sigma << " k " << k);
      CHECK(std::abs(panel.moment(k) - exact) / exact < 0.02);
    }
  }
}

TEST_CASE("non-compelled draws follow the interval probabilities") {
  const PartitionSpec spec{4, 1};
  const auto set = constant_set(spec, [](int j) { return static_cast<double>(j); });
  const std::size_t blocks = 200000;
  auto fresh = [&] {
    PanelSet p;
    p.block_size = 1;
    p.amplitudes.assign(blocks, 0.0);
    p.block_weights.assign(blocks, 1.0 / blocks);
    return p;
  };
  const std::vector<Link> links{{&set, 1.0}};
  SUBCASE("no loading") {
    auto panel = fresh();
    Rng rng = make_stream(4, 0);
    add_noncompelled(panel, links, 4, rng);
    std::map<int, double> freq;
    for (double a : panel.amplitudes) freq[static_cast<int>(a)] += 1.0 / blocks;
    for (int j = 1; j <= 4; ++j) {
      const double d = spec.length(j);
      CHECK(std::abs(freq[j] - d) < 5.0 * std::sqrt(d * (1.0 - d) / blocks) + 1e-12);
    }
  }
  SUBCASE("loaded mean") {
    const auto real = build_typical_set(6.0, {8, 20});
    const std::vector<Link> l{{&real, 2.0}};
    PanelSet panel;
    panel.block_size = 20;
    panel.amplitudes.assign(20 * 20000, 0.0);
    panel.block_weights.assign(20000, 1.0 / 20000);
    Rng rng = make_stream(8, 0);
    add_noncompelled(panel, l, 3, rng);
    double alpha_sum = 0.0, expect = 0.0;
    for (int j = 1; j <= 3; ++j) alpha_sum += real.spec().length(j);
    for (int j = 1; j <= 3; ++j) expect += real.spec().length(j) / alpha_sum * interval_mean(real, j);
    expect *= 2.0;
    CHECK(panel.weighted_mean() == doctest::Approx(expect).epsilon(0.01));
  }
}

TEST_CASE("weighted histogram") {
  const std::vector<double> v{0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  const std::vector<double> w{0.1, 0.2, 0.3, 0.2, 0.1, 0.1};
  const auto edges = quantile_log_edges(v, w, 4, 0.05, 0.05);
  const auto h = weighted_histogram(v, w, edges);
  CHECK(h.total_mass() == doctest::Approx(1.0));
  const auto cdf = h.cdf_at_edges();
  for (std::size_t i = 1; i + 1 < h.edges.size(); ++i) {
    double direct = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] < h.edges[i]) direct += w[k];
    }
    CHECK(cdf[i] == doctest::Approx(direct));
  }
  CHECK(cdf.back() == doctest::Approx(1.0));
}

TEST_CASE("run is deterministic and thread independent") {
  ScenarioConfig c;
  c.reuse = Reuse::FR3;
  c.sigma_db = 6.0;
  const auto s = Scenario::build(c);
  McpConfig m;
  m.partition = {8, 60};
  m.iterations = 40;
  const auto set = build_typical_set(6.0, m.partition);
  const auto a = run_mcp(s, m, set);
  const auto b = run_mcp(s, m, set);
  m.threads = 3;
  const auto t = run_mcp(s, m, set);
  CHECK(a.mean == b.mean);
  CHECK(a.mean == t.mean);
  CHECK(a.panel.amplitudes == b.panel.amplitudes);
  CHECK(a.histogram.masses == t.histogram.masses);
  CHECK(a.histogram.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  for (double x : a.panel.amplitudes) CHECK(x >= 0.0);
  m.seed = 43;
  CHECK(run_mcp(s, m, set).mean != a.mean);
}

TEST_CASE("mean without shadowing after iteration averaging") {
  ScenarioConfig c;
  c.reuse = Reuse::FR3;
  const auto s = Scenario::build(c);
  McpConfig m;
  m.iterations = 400;
  const auto r = run_mcp(s, m);
  INFO("mean " << r.mean << " +- " << r.mean_std_error);
  CHECK(std::abs(r.relative_deviation) < 0.01);
  CHECK_FALSE(r.diverged);
}

TEST_CASE("configuration checks") {
  ScenarioConfig c;
  c.reuse = Reuse::FR3;
  const auto s = Scenario::build(c);
  McpConfig m;
  m.compelled = 6;
  CHECK_THROWS_AS(m.validate(s.interferer_count()), Error);
  m.compelled = 2;
  m.loaded_intervals = 25;
  CHECK_THROWS_AS(m.validate(s.interferer_count()), Error);
  m.loaded_intervals = 3;
  m.iterations = 0;
  CHECK_THROWS_AS(m.validate(s.interferer_count()), Error);
}

TEST_CASE("panel set binary round trip") {
  const auto set = build_typical_set(3.0, {3, 4});
  const std::vector<Link> links{{&set, 1.0}, {&set, 0.5}};
  Rng rng = make_stream(9, 0);
  const auto p = combine_compelled(links, {}, 1, rng);
  std::stringstream buf;
  write_panel_set(buf, p);
  const auto q = read_panel_set(buf);
  CHECK(q.block_size == p.block_size);
  CHECK(q.compelled == p.compelled);
  CHECK(q.amplitudes == p.amplitudes);
  CHECK(q.block_weights == p.block_weights);
  CHECK(q.combos == p.combos);
}
