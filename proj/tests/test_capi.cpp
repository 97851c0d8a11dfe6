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
#include <cstdio>
#include <string>
#include <vector>

#include "icistat/icistat.h"

TEST_CASE("version and status strings") {
  CHECK(std::string(icistat_version()).size() > 0);
  CHECK(std::string(icistat_status_string(ICISTAT_OK)) == "ok");
  CHECK(std::string(icistat_status_string(ICISTAT_ERR_PARSE)) == "parse error");
}

TEST_CASE("scenario lifecycle") {
  icistat_scenario_config cfg;
  icistat_scenario_config_default(&cfg);
  CHECK(cfg.reuse == ICISTAT_FR1);
  CHECK(cfg.cell_radius == 700.0);
  icistat_scenario* s = nullptr;
  REQUIRE(icistat_scenario_create(&cfg, &s) == ICISTAT_OK);
  REQUIRE(icistat_scenario_interferer_count(s) == 18);
  std::vector<double> l(18);
  std::vector<uint32_t> aps(18);
  CHECK(icistat_scenario_lambdas(s, l.data(), aps.data(), 18) == ICISTAT_OK);
  CHECK(l[0] == doctest::Approx(6.467).epsilon(1e-3));
  CHECK(icistat_scenario_lambdas(s, l.data(), nullptr, 3) == ICISTAT_ERR_BUFFER_TOO_SMALL);
  CHECK(std::string(icistat_last_error()).find("buffer") != std::string::npos);
  double mean = 0.0;
  CHECK(icistat_scenario_exact_mean(s, &mean) == ICISTAT_OK);
  CHECK(mean == doctest::Approx(17.25).epsilon(1e-3));
  icistat_scenario_destroy(s);
  icistat_scenario_destroy(nullptr);
}

TEST_CASE("errors carry codes and messages") {
  icistat_scenario* s = nullptr;
  CHECK(icistat_scenario_create(nullptr, &s) == ICISTAT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(icistat_last_error()).find("null") != std::string::npos);
  icistat_scenario_config cfg;
  icistat_scenario_config_default(&cfg);
  cfg.reuse = 7;
  CHECK(icistat_scenario_create(&cfg, &s) == ICISTAT_ERR_INVALID_ARGUMENT);
  cfg.reuse = ICISTAT_FR1;
  cfg.sigma_db = 20.0;
  CHECK(icistat_scenario_create(&cfg, &s) != ICISTAT_OK);
  CHECK(s == nullptr);
  double v = 0.0;
  CHECK(icistat_single_moment(2, 12.0, &v) == ICISTAT_OK);
  CHECK(std::string(icistat_last_error()).empty());
  icistat_scenario_config loaded;
  CHECK(icistat_scenario_config_load("/nonexistent.cfg", &loaded) == ICISTAT_ERR_IO);
}

TEST_CASE("config file round trip through the C API") {
  icistat_scenario_config cfg;
  icistat_scenario_config_default(&cfg);
  cfg.sigma_db = 0.1;
  cfg.reuse = ICISTAT_FR3;
  const std::string path = "capi_roundtrip.cfg";
  REQUIRE(icistat_scenario_config_save(path.c_str(), &cfg) == ICISTAT_OK);
  icistat_scenario_config back;
  REQUIRE(icistat_scenario_config_load(path.c_str(), &back) == ICISTAT_OK);
  CHECK(back.sigma_db == cfg.sigma_db);
  CHECK(back.reuse == ICISTAT_FR3);
  std::FILE* f = std::fopen(path.c_str(), "w");
  std::fputs("gamma = 3\n", f);
  std::fclose(f);
  CHECK(icistat_scenario_config_load(path.c_str(), &back) == ICISTAT_ERR_PARSE);
  std::remove(path.c_str());
}

TEST_CASE("layout and closed forms") {
  double x[ICISTAT_AP_COUNT], y[ICISTAT_AP_COUNT];
  int ring[ICISTAT_AP_COUNT];
  REQUIRE(icistat_layout(1.0, x, y, ring) == ICISTAT_OK);
  CHECK(std::hypot(x[1], y[1]) == doctest::Approx(std::sqrt(3.0)));
  CHECK(ring[18] == 2);
  CHECK(icistat_layout(-1.0, x, y, ring) == ICISTAT_ERR_INVALID_ARGUMENT);

  const double lambdas[2] = {2.0, 1.0};
  const double pts[2] = {1.0, 3.0};
  double pdf[2], cdf[2];
  REQUIRE(icistat_hypoexp_eval(lambdas, 2, pts, 2, pdf, cdf) == ICISTAT_OK);
  CHECK(cdf[0] == doctest::Approx(1.0 - 2.0 * std::exp(-0.5) + std::exp(-1.0)));
  double m = 0.0;
  REQUIRE(icistat_multi_moment(1, lambdas, 2, 6.0, &m) == ICISTAT_OK);
  CHECK(m == doctest::Approx(3.0));
}

TEST_CASE("typical set handle") {
  icistat_typical_set* ts = nullptr;
  REQUIRE(icistat_typical_set_build(6.0, 4, 10, 1, &ts) == ICISTAT_OK);
  REQUIRE(icistat_typical_set_size(ts) == 40);
  std::vector<double> a(40), p(40);
  std::vector<int> j(40);
  REQUIRE(icistat_typical_set_data(ts, a.data(), p.data(), j.data(), 40) == ICISTAT_OK);
  CHECK(j[0] == 1);
  CHECK(j[39] == 4);
  CHECK(p[0] == doctest::Approx(0.09));
  REQUIRE(icistat_typical_set_save(ts, "capi_ts.bin") == ICISTAT_OK);
  icistat_typical_set* back = nullptr;
  REQUIRE(icistat_typical_set_load("capi_ts.bin", &back) == ICISTAT_OK);
  double m1 = 0.0, m2 = 0.0;
  icistat_typical_set_moment(ts, 2, &m1);
  icistat_typical_set_moment(back, 2, &m2);
  CHECK(m1 == m2);
  icistat_typical_set_destroy(back);
  icistat_typical_set_destroy(ts);
  std::remove("capi_ts.bin");
  CHECK(icistat_typical_set_build(6.0, 0, 10, 1, &ts) == ICISTAT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("mcp handle") {
  icistat_scenario_config cfg;
  icistat_scenario_config_default(&cfg);
  cfg.reuse = ICISTAT_FR3;
  icistat_scenario* s = nullptr;
  REQUIRE(icistat_scenario_create(&cfg, &s) == ICISTAT_OK);
  icistat_mcp_config mc;
  icistat_mcp_config_default(&mc);
  CHECK(mc.compelled == 2);
  CHECK(mc.loaded_intervals == 3);
  CHECK(mc.iterations == 20000);
  mc.iterations = 4;
  mc.intervals = 6;
  mc.points = 30;
  mc.histogram_bins = 16;
  icistat_mcp_result* r = nullptr;
  REQUIRE(icistat_mcp_run(s, &mc, &r) == ICISTAT_OK);
  icistat_mcp_summary sum;
  REQUIRE(icistat_mcp_summary_get(r, &sum) == ICISTAT_OK);
  CHECK(sum.iterations == 4);
  CHECK(sum.exact_mean == doctest::Approx(1.857).epsilon(1e-3));
  REQUIRE(icistat_mcp_histogram_bins(r) == 16);
  std::vector<double> lo(16), hi(16), mass(16);
  REQUIRE(icistat_mcp_histogram(r, lo.data(), hi.data(), mass.data(), 16) == ICISTAT_OK);
  double total = 0.0;
  for (double v : mass) total += v;
  CHECK(total == doctest::Approx(1.0));
  CHECK(hi[0] == lo[1]);
  icistat_mcp_result_destroy(r);
  mc.compelled = 6;
  CHECK(icistat_mcp_run(s, &mc, &r) == ICISTAT_ERR_INVALID_ARGUMENT);
  icistat_scenario_destroy(s);
}

TEST_CASE("burr handle functions") {
  icistat_burr_params m;
  REQUIRE(icistat_burr_model(ICISTAT_FR1, 0.0, &m) == ICISTAT_OK);
  CHECK(m.eta == doctest::Approx(4.0));
  CHECK(m.x_t == doctest::Approx(62.31).epsilon(1e-4));
  double q = 0.0;
  REQUIRE(icistat_burr_quantile(&m, 0.5, &q) == ICISTAT_OK);
  double cdf = 0.0;
  REQUIRE(icistat_burr_eval(&m, &q, 1, nullptr, &cdf) == ICISTAT_OK);
  CHECK(cdf == doctest::Approx(0.5).epsilon(1e-12));
  std::vector<double> draws(1000);
  REQUIRE(icistat_burr_sample(&m, 1, draws.size(), draws.data()) == ICISTAT_OK);
  for (double d : draws) CHECK(d <= m.x_t);
  CHECK(icistat_burr_model(ICISTAT_FR3, 6.0, &m) == ICISTAT_ERR_INVALID_PARAMETER);
  CHECK(std::string(icistat_last_error()).find("eta") != std::string::npos);
  double raw[5];
  REQUIRE(icistat_burr_raw_laws(ICISTAT_FR3, 6.0, raw) == ICISTAT_OK);
  CHECK(raw[0] < 0.0);
  CHECK(icistat_burr_model(ICISTAT_FR1, 13.0, &m) == ICISTAT_ERR_OUT_OF_RANGE);
}

TEST_CASE("simulation handle") {
  icistat_scenario_config cfg;
  icistat_scenario_config_default(&cfg);
  const double one = 1.0;
  icistat_scenario* s = nullptr;
  REQUIRE(icistat_scenario_from_lambdas(&cfg, &one, 1, &s) == ICISTAT_OK);
  icistat_simulation* sim = nullptr;
  REQUIRE(icistat_simulate(s, ICISTAT_SIM_APPROX, 100000, 5, 2, &sim) == ICISTAT_OK);
  icistat_sim_summary sum;
  REQUIRE(icistat_simulation_summary(sim, &sum) == ICISTAT_OK);
  CHECK(sum.draws == 100000);
  CHECK(sum.has_samples == 1);
  CHECK(sum.moments[0] == doctest::Approx(1.0).epsilon(0.02));
  double med = 0.0, c = 0.0;
  REQUIRE(icistat_simulation_quantile(sim, 0.5, &med) == ICISTAT_OK);
  CHECK(med == doctest::Approx(std::log(2.0)).epsilon(0.02));
  REQUIRE(icistat_simulation_cdf(sim, &med, 1, &c) == ICISTAT_OK);
  CHECK(c == doctest::Approx(0.5).epsilon(1e-3));
  icistat_simulation_destroy(sim);
  CHECK(icistat_simulate(s, ICISTAT_SIM_EXACT, 10, 5, 1, &sim) == ICISTAT_ERR_INVALID_ARGUMENT);
  CHECK(icistat_simulate(s, 9, 10, 5, 1, &sim) == ICISTAT_ERR_INVALID_ARGUMENT);
  icistat_scenario_destroy(s);
}
