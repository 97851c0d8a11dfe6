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

#include "icistat/icistat.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "icistat/burr_model.hpp"
#include "icistat/cache.hpp"
#include "icistat/closed_form.hpp"
#include "icistat/error.hpp"
#include "icistat/geometry.hpp"
#include "icistat/mcp.hpp"
#include "icistat/scenario.hpp"
#include "icistat/scenario_io.hpp"
#include "icistat/simulator.hpp"
#include "icistat/typical_set.hpp"

using namespace icistat;

struct icistat_scenario {
  Scenario scenario;
};

struct icistat_typical_set {
  TypicalSet set;
};

struct icistat_mcp_result {
  McpResult result;
};

struct icistat_simulation {
  SimulationResult result;
  std::vector<double> sorted;
};

namespace {

thread_local std::string g_last_error;

struct BufferTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int status_of(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return ICISTAT_ERR_INVALID_ARGUMENT;
    case Errc::out_of_range: return ICISTAT_ERR_OUT_OF_RANGE;
    case Errc::numerical_failure: return ICISTAT_ERR_NUMERICAL;
    case Errc::io_error: return ICISTAT_ERR_IO;
    case Errc::parse_error: return ICISTAT_ERR_PARSE;
    case Errc::cache_mismatch: return ICISTAT_ERR_CACHE_MISMATCH;
    case Errc::not_converged: return ICISTAT_ERR_NOT_CONVERGED;
    case Errc::invalid_parameter: return ICISTAT_ERR_INVALID_PARAMETER;
  }
  return ICISTAT_ERR_INTERNAL;
}

template <typename F>
int guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return ICISTAT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const BufferTooSmall& e) {
    g_last_error = e.what();
    return ICISTAT_ERR_BUFFER_TOO_SMALL;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ICISTAT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ICISTAT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ICISTAT_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) fail(Errc::invalid_argument, std::string(what) + " must not be null");
}

Reuse reuse_of(int r) {
  if (r == ICISTAT_FR1) return Reuse::FR1;
  if (r == ICISTAT_FR3) return Reuse::FR3;
  fail(Errc::invalid_argument, "unknown reuse pattern " + std::to_string(r));
}

ScenarioConfig to_core(const icistat_scenario_config& c) {
  ScenarioConfig s;
  s.cell_radius = c.cell_radius;
  s.gamma = c.gamma;
  s.d_ref_multiplier = c.d_ref_multiplier;
  s.sigma_db = c.sigma_db;
  s.reuse = reuse_of(c.reuse);
  s.seed = c.seed;
  return s;
}

icistat_scenario_config from_core(const ScenarioConfig& s) {
  return {s.cell_radius, s.gamma, s.d_ref_multiplier, s.sigma_db,
          s.reuse == Reuse::FR1 ? ICISTAT_FR1 : ICISTAT_FR3, s.seed};
}

void check_capacity(std::size_t need_n, std::size_t capacity) {
  if (capacity < need_n) {
    throw BufferTooSmall("buffer holds " + std::to_string(capacity) +
                                            " values, " + std::to_string(need_n) + " needed");
  }
}

BurrModel burr_of(const icistat_burr_params* m) {
  need(m, "model");
  BurrModel b{m->eta, m->alpha, m->k, m->beta, m->x_t, m->A};
  b.validate();
  return b;
}

}  // namespace

extern "C" {

const char* icistat_version(void) { return "0.1.0"; }

const char* icistat_last_error(void) { return g_last_error.c_str(); }

const char* icistat_status_string(int status) {
  switch (status) {
    case ICISTAT_OK: return "ok";
    case ICISTAT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ICISTAT_ERR_OUT_OF_RANGE: return "out of range";
    case ICISTAT_ERR_NUMERICAL: return "numerical failure";
    case ICISTAT_ERR_IO: return "i/o error";
    case ICISTAT_ERR_PARSE: return "parse error";
    case ICISTAT_ERR_CACHE_MISMATCH: return "cache mismatch";
    case ICISTAT_ERR_NOT_CONVERGED: return "not converged";
    case ICISTAT_ERR_INVALID_PARAMETER: return "invalid parameter";
    case ICISTAT_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    default: return "internal error";
  }
}

void icistat_scenario_config_default(icistat_scenario_config* out) {
  if (out != nullptr) *out = from_core(ScenarioConfig{});
}

int icistat_scenario_config_load(const char* path, icistat_scenario_config* out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = from_core(load_scenario_config(path));
  });
}

int icistat_scenario_config_save(const char* path, const icistat_scenario_config* cfg) {
  return guarded([&] {
    need(path, "path");
    need(cfg, "cfg");
    save_scenario_config(path, to_core(*cfg));
  });
}

int icistat_reuse_parse(const char* text, int* out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = parse_reuse(text) == Reuse::FR1 ? ICISTAT_FR1 : ICISTAT_FR3;
  });
}

const char* icistat_reuse_name(int reuse) {
  if (reuse == ICISTAT_FR1) return "FR1";
  if (reuse == ICISTAT_FR3) return "FR3";
  return "?";
}

int icistat_scenario_create(const icistat_scenario_config* cfg, icistat_scenario** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = new icistat_scenario{Scenario::build(to_core(*cfg))};
  });
}

int icistat_scenario_from_lambdas(const icistat_scenario_config* cfg, const double* lambdas,
                                  size_t count, icistat_scenario** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    if (count > 0) need(lambdas, "lambdas");
    std::vector<double> l(lambdas, lambdas + count);
    *out = new icistat_scenario{Scenario::from_lambdas(to_core(*cfg), std::move(l))};
  });
}

void icistat_scenario_destroy(icistat_scenario* s) { delete s; }

size_t icistat_scenario_interferer_count(const icistat_scenario* s) {
  return s == nullptr ? 0 : s->scenario.interferer_count();
}

int icistat_scenario_lambdas(const icistat_scenario* s, double* lambdas, uint32_t* aps,
                             size_t capacity) {
  return guarded([&] {
    need(s, "scenario");
    const auto l = s->scenario.lambdas();
    check_capacity(l.size(), capacity);
    if (lambdas != nullptr) std::copy(l.begin(), l.end(), lambdas);
    if (aps != nullptr) {
      const auto a = s->scenario.interferer_aps();
      for (std::size_t i = 0; i < a.size(); ++i) aps[i] = static_cast<uint32_t>(a[i]);
    }
  });
}

int icistat_scenario_exact_mean(const icistat_scenario* s, double* out) {
  return guarded([&] {
    need(s, "scenario");
    need(out, "out");
    *out = s->scenario.exact_mean();
  });
}

int icistat_layout(double cell_radius, double* x, double* y, int* ring) {
  return guarded([&] {
    const auto layout = NetworkLayout::hexagonal(cell_radius);
    const auto pos = layout.ap_positions();
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (x != nullptr) x[i] = pos[i].x;
      if (y != nullptr) y[i] = pos[i].y;
      if (ring != nullptr) ring[i] = layout.ring(i);
    }
  });
}

int icistat_single_moment(int k, double sigma_db, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = single_moment(k, sigma_db);
  });
}

int icistat_multi_moment(int k, const double* lambdas, size_t count, double sigma_db,
                         double* out) {
  return guarded([&] {
    need(out, "out");
    if (count > 0) need(lambdas, "lambdas");
    *out = multi_moment(k, std::span<const double>(lambdas, count), sigma_db);
  });
}

int icistat_hypoexp_eval(const double* lambdas, size_t count, const double* x, size_t n,
                         double* pdf, double* cdf) {
  return guarded([&] {
    need(lambdas, "lambdas");
    if (n > 0) need(x, "x");
    const HypoExponential h(std::vector<double>(lambdas, lambdas + count));
    for (size_t i = 0; i < n; ++i) {
      if (pdf != nullptr) pdf[i] = h.pdf(x[i]);
      if (cdf != nullptr) cdf[i] = h.cdf(x[i]);
    }
  });
}

int icistat_typical_set_build(double sigma_db, int intervals, int points, unsigned threads,
                              icistat_typical_set** out) {
  return guarded([&] {
    need(out, "out");
    const PartitionSpec spec{intervals, points};
    spec.validate();
    const auto cache = Cache::from_env();
    *out = new icistat_typical_set{
        cached_typical_set(sigma_db, spec, threads, cache ? &*cache : nullptr)};
  });
}

int icistat_typical_set_load(const char* path, icistat_typical_set** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, std::string("cannot open ") + path);
    *out = new icistat_typical_set{read_typical_set(in)};
  });
}

int icistat_typical_set_save(const icistat_typical_set* ts, const char* path) {
  return guarded([&] {
    need(ts, "typical set");
    need(path, "path");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, std::string("cannot write ") + path);
    write_typical_set(out, ts->set);
  });
}

void icistat_typical_set_destroy(icistat_typical_set* ts) { delete ts; }

size_t icistat_typical_set_size(const icistat_typical_set* ts) {
  return ts == nullptr ? 0 : ts->set.size();
}

int icistat_typical_set_data(const icistat_typical_set* ts, double* amplitudes,
                             double* probabilities, int* interval, size_t capacity) {
  return guarded([&] {
    need(ts, "typical set");
    const auto& set = ts->set;
    check_capacity(set.size(), capacity);
    const auto a = set.amplitudes();
    const auto p = set.probabilities();
    const auto per = static_cast<std::size_t>(set.spec().points);
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (amplitudes != nullptr) amplitudes[i] = a[i];
      if (probabilities != nullptr) probabilities[i] = p[i];
      if (interval != nullptr) interval[i] = static_cast<int>(i / per) + 1;
    }
  });
}

int icistat_typical_set_moment(const icistat_typical_set* ts, int k, double* out) {
  return guarded([&] {
    need(ts, "typical set");
    need(out, "out");
    *out = ts->set.moment(k);
  });
}

void icistat_mcp_config_default(icistat_mcp_config* out) {
  if (out == nullptr) return;
  const McpConfig c;
  *out = {c.compelled,
          c.loaded_intervals,
          c.iterations,
          c.seed,
          c.partition.intervals,
          c.partition.points,
          c.histogram_bins,
          c.histogram_lower_quantile,
          c.histogram_upper_tail,
          c.threads};
}

int icistat_mcp_run(const icistat_scenario* s, const icistat_mcp_config* cfg,
                    icistat_mcp_result** out) {
  return guarded([&] {
    need(s, "scenario");
    need(cfg, "cfg");
    need(out, "out");
    McpConfig c;
    c.compelled = cfg->compelled;
    c.loaded_intervals = cfg->loaded_intervals;
    c.iterations = cfg->iterations;
    c.seed = cfg->seed;
    c.partition = {cfg->intervals, cfg->points};
    c.histogram_bins = cfg->histogram_bins;
    c.histogram_lower_quantile = cfg->histogram_lower_quantile;
    c.histogram_upper_tail = cfg->histogram_upper_tail;
    c.threads = cfg->threads;
    c.validate(s->scenario.interferer_count());
    const auto cache = Cache::from_env();
    const TypicalSet set = cached_typical_set(s->scenario.sigma_db(), c.partition, c.threads,
                                              cache ? &*cache : nullptr);
    *out = new icistat_mcp_result{run_mcp(s->scenario, c, set)};
  });
}

void icistat_mcp_result_destroy(icistat_mcp_result* r) { delete r; }

int icistat_mcp_summary_get(const icistat_mcp_result* r, icistat_mcp_summary* out) {
  return guarded([&] {
    need(r, "result");
    need(out, "out");
    const auto& m = r->result;
    *out = {m.mean,
            m.mean_std_error,
            m.exact_mean,
            m.relative_deviation,
            m.diverged ? 1 : 0,
            m.iterations,
            m.factors.under,
            m.factors.over,
            m.factors.alpha};
  });
}

size_t icistat_mcp_histogram_bins(const icistat_mcp_result* r) {
  return r == nullptr ? 0 : r->result.histogram.masses.size();
}

int icistat_mcp_histogram(const icistat_mcp_result* r, double* bin_lo, double* bin_hi,
                          double* mass, size_t capacity) {
  return guarded([&] {
    need(r, "result");
    const auto& h = r->result.histogram;
    check_capacity(h.masses.size(), capacity);
    for (std::size_t i = 0; i < h.masses.size(); ++i) {
      if (bin_lo != nullptr) bin_lo[i] = h.edges[i];
      if (bin_hi != nullptr) bin_hi[i] = h.edges[i + 1];
      if (mass != nullptr) mass[i] = h.masses[i];
    }
  });
}

int icistat_mcp_panel_save(const icistat_mcp_result* r, const char* path) {
  return guarded([&] {
    need(r, "result");
    need(path, "path");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, std::string("cannot write ") + path);
    write_panel_set(out, r->result.panel);
  });
}

int icistat_burr_model(int reuse, double sigma_db, icistat_burr_params* out) {
  return guarded([&] {
    need(out, "out");
    const BurrModel m = model_for(reuse_of(reuse), sigma_db);
    *out = {m.eta, m.alpha, m.k, m.beta, m.x_t, m.A};
  });
}

int icistat_burr_raw_laws(int reuse, double sigma_db, double out[5]) {
  return guarded([&] {
    need(out, "out");
    const Reuse r = reuse_of(reuse);
    out[0] = empirical_param(BurrParam::eta, r, sigma_db);
    out[1] = empirical_param(BurrParam::alpha, r, sigma_db);
    out[2] = empirical_param(BurrParam::k, r, sigma_db);
    out[3] = empirical_param(BurrParam::beta, r, sigma_db);
    out[4] = truncation_point(r, sigma_db);
  });
}

int icistat_burr_eval(const icistat_burr_params* m, const double* x, size_t n, double* pdf,
                      double* cdf) {
  return guarded([&] {
    const BurrModel b = burr_of(m);
    if (n > 0) need(x, "x");
    for (size_t i = 0; i < n; ++i) {
      if (x[i] < 0.0) fail(Errc::out_of_range, "Burr evaluation needs x >= 0");
      if (pdf != nullptr) pdf[i] = truncated_pdf(b, x[i]);
      if (cdf != nullptr) cdf[i] = truncated_cdf(b, x[i]);
    }
  });
}

int icistat_burr_quantile(const icistat_burr_params* m, double p, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = truncated_quantile(burr_of(m), p);
  });
}

int icistat_burr_truncated_mean(const icistat_burr_params* m, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = truncated_mean(burr_of(m));
  });
}

int icistat_burr_sample(const icistat_burr_params* m, uint64_t seed, size_t count, double* out) {
  return guarded([&] {
    const BurrModel b = burr_of(m);
    if (count > 0) need(out, "out");
    Rng rng = make_stream(seed, 0);
    const auto draws = sample_model(b, rng, count);
    std::copy(draws.begin(), draws.end(), out);
  });
}

int icistat_simulate(const icistat_scenario* s, int mode, size_t draws, uint64_t seed,
                     unsigned threads, icistat_simulation** out) {
  return guarded([&] {
    need(s, "scenario");
    need(out, "out");
    SimulationMode m;
    if (mode == ICISTAT_SIM_EXACT) {
      m = SimulationMode::exact;
    } else if (mode == ICISTAT_SIM_APPROX) {
      m = SimulationMode::approx;
    } else {
      fail(Errc::invalid_argument, "unknown simulation mode " + std::to_string(mode));
    }
    SimulationConfig c;
    c.draws = draws;
    c.seed = seed;
    c.threads = threads;
    auto* sim = new icistat_simulation{simulate(s->scenario, m, c), {}};
    sim->sorted = std::move(sim->result.samples);
    std::sort(sim->sorted.begin(), sim->sorted.end());
    *out = sim;
  });
}

void icistat_simulation_destroy(icistat_simulation* sim) { delete sim; }

int icistat_simulation_summary(const icistat_simulation* sim, icistat_sim_summary* out) {
  return guarded([&] {
    need(sim, "simulation");
    need(out, "out");
    out->draws = sim->result.moments.count();
    for (int k = 1; k <= 4; ++k) out->moments[k - 1] = sim->result.moments.moment(k);
    out->has_samples = sim->sorted.empty() ? 0 : 1;
  });
}

int icistat_simulation_quantile(const icistat_simulation* sim, double q, double* out) {
  return guarded([&] {
    need(sim, "simulation");
    need(out, "out");
    if (!(q >= 0.0 && q <= 1.0)) fail(Errc::out_of_range, "quantile level must lie in [0, 1]");
    if (sim->sorted.empty()) {
      *out = sim->result.sketch.quantile(q);
    } else {
      const auto i = static_cast<std::size_t>(
          std::floor(q * static_cast<double>(sim->sorted.size() - 1)));
      *out = sim->sorted[i];
    }
  });
}

int icistat_simulation_cdf(const icistat_simulation* sim, const double* x, size_t n,
                           double* out) {
  return guarded([&] {
    need(sim, "simulation");
    if (n > 0) {
      need(x, "x");
      need(out, "out");
    }
    const auto& v = sim->sorted;
    for (size_t i = 0; i < n; ++i) {
      if (v.empty()) {
        out[i] = sim->result.sketch.cdf(x[i]);
      } else {
        const auto k = std::upper_bound(v.begin(), v.end(), x[i]) - v.begin();
        out[i] = static_cast<double>(k) / static_cast<double>(v.size());
      }
    }
  });
}

}  // extern "C"
