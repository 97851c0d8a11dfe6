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

#ifndef ICISTAT_ICISTAT_H
#define ICISTAT_ICISTAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ICISTAT_API __declspec(dllexport)
#else
#define ICISTAT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure icistat_last_error()
 * holds a message for the calling thread. */
typedef enum icistat_status {
  ICISTAT_OK = 0,
  ICISTAT_ERR_INVALID_ARGUMENT = 1,
  ICISTAT_ERR_OUT_OF_RANGE = 2,
  ICISTAT_ERR_NUMERICAL = 3,
  ICISTAT_ERR_IO = 4,
  ICISTAT_ERR_PARSE = 5,
  ICISTAT_ERR_CACHE_MISMATCH = 6,
  ICISTAT_ERR_NOT_CONVERGED = 7,
  ICISTAT_ERR_INVALID_PARAMETER = 8,
  ICISTAT_ERR_BUFFER_TOO_SMALL = 9,
  ICISTAT_ERR_INTERNAL = 10
} icistat_status;

typedef enum icistat_reuse { ICISTAT_FR1 = 0, ICISTAT_FR3 = 1 } icistat_reuse;
typedef enum icistat_sim_mode { ICISTAT_SIM_EXACT = 0, ICISTAT_SIM_APPROX = 1 } icistat_sim_mode;

typedef struct icistat_scenario icistat_scenario;
typedef struct icistat_typical_set icistat_typical_set;
typedef struct icistat_mcp_result icistat_mcp_result;
typedef struct icistat_simulation icistat_simulation;

ICISTAT_API const char *icistat_version(void);
ICISTAT_API const char *icistat_last_error(void);
ICISTAT_API const char *icistat_status_string(int status);

/* ---- scenario ---- */

typedef struct icistat_scenario_config {
  double cell_radius;
  double gamma;
  double d_ref_multiplier;
  double sigma_db;
  int reuse; /* icistat_reuse */
  uint64_t seed;
} icistat_scenario_config;

ICISTAT_API void icistat_scenario_config_default(icistat_scenario_config *out);
ICISTAT_API int icistat_scenario_config_load(const char *path, icistat_scenario_config *out);
ICISTAT_API int icistat_scenario_config_save(const char *path, const icistat_scenario_config *cfg);
ICISTAT_API int icistat_reuse_parse(const char *text, int *out);
ICISTAT_API const char *icistat_reuse_name(int reuse);

ICISTAT_API int icistat_scenario_create(const icistat_scenario_config *cfg,
                                        icistat_scenario **out);
/* Scenario with caller-supplied lambdas and no geometry. */
ICISTAT_API int icistat_scenario_from_lambdas(const icistat_scenario_config *cfg,
                                              const double *lambdas, size_t count,
                                              icistat_scenario **out);
ICISTAT_API void icistat_scenario_destroy(icistat_scenario *s);
ICISTAT_API size_t icistat_scenario_interferer_count(const icistat_scenario *s);
/* Lambdas in decreasing order and the matching AP indices (aps may be NULL;
 * it stays unfilled for lambda-only scenarios). */
ICISTAT_API int icistat_scenario_lambdas(const icistat_scenario *s, double *lambdas,
                                         uint32_t *aps, size_t capacity);
ICISTAT_API int icistat_scenario_exact_mean(const icistat_scenario *s, double *out);

/* ---- layout ---- */

#define ICISTAT_AP_COUNT 19
/* x, y, ring for the 19 APs; any output may be NULL. */
ICISTAT_API int icistat_layout(double cell_radius, double *x, double *y, int *ring);

/* ---- closed forms ---- */

ICISTAT_API int icistat_single_moment(int k, double sigma_db, double *out);
ICISTAT_API int icistat_multi_moment(int k, const double *lambdas, size_t count, double sigma_db,
                                     double *out);
/* Sum of independent exponentials with the given means; pdf or cdf may be NULL. */
ICISTAT_API int icistat_hypoexp_eval(const double *lambdas, size_t count, const double *x,
                                     size_t n, double *pdf, double *cdf);

/* ---- typical set ---- */

/* Uses the cache directory from ICISTAT_CACHE_DIR when set. */
ICISTAT_API int icistat_typical_set_build(double sigma_db, int intervals, int points,
                                          unsigned threads, icistat_typical_set **out);
ICISTAT_API int icistat_typical_set_load(const char *path, icistat_typical_set **out);
ICISTAT_API int icistat_typical_set_save(const icistat_typical_set *ts, const char *path);
ICISTAT_API void icistat_typical_set_destroy(icistat_typical_set *ts);
ICISTAT_API size_t icistat_typical_set_size(const icistat_typical_set *ts);
/* amplitudes, probabilities and interval index (1-based); any may be NULL. */
ICISTAT_API int icistat_typical_set_data(const icistat_typical_set *ts, double *amplitudes,
                                         double *probabilities, int *interval, size_t capacity);
ICISTAT_API int icistat_typical_set_moment(const icistat_typical_set *ts, int k, double *out);

/* ---- MCP ---- */

typedef struct icistat_mcp_config {
  int compelled;
  int loaded_intervals;
  size_t iterations;
  uint64_t seed;
  int intervals;
  int points;
  size_t histogram_bins;
  double histogram_lower_quantile;
  double histogram_upper_tail;
  unsigned threads;
} icistat_mcp_config;

typedef struct icistat_mcp_summary {
  double mean;
  double mean_std_error;
  double exact_mean;
  double relative_deviation;
  int diverged;
  size_t iterations;
  double f_under;
  double f_over;
  double alpha;
} icistat_mcp_summary;

ICISTAT_API void icistat_mcp_config_default(icistat_mcp_config *out);
ICISTAT_API int icistat_mcp_run(const icistat_scenario *s, const icistat_mcp_config *cfg,
                                icistat_mcp_result **out);
ICISTAT_API void icistat_mcp_result_destroy(icistat_mcp_result *r);
ICISTAT_API int icistat_mcp_summary_get(const icistat_mcp_result *r, icistat_mcp_summary *out);
ICISTAT_API size_t icistat_mcp_histogram_bins(const icistat_mcp_result *r);
ICISTAT_API int icistat_mcp_histogram(const icistat_mcp_result *r, double *bin_lo,
                                      double *bin_hi, double *mass, size_t capacity);
ICISTAT_API int icistat_mcp_panel_save(const icistat_mcp_result *r, const char *path);

/* ---- Burr model ---- */

typedef struct icistat_burr_params {
  double eta;
  double alpha;
  double k;
  double beta;
  double x_t;
  double A;
} icistat_burr_params;

ICISTAT_API int icistat_burr_model(int reuse, double sigma_db, icistat_burr_params *out);
/* Raw empirical-law values, which may be non-positive; order eta, alpha, k, beta, x_t. */
ICISTAT_API int icistat_burr_raw_laws(int reuse, double sigma_db, double out[5]);
/* Truncated pdf and cdf; either may be NULL. */
ICISTAT_API int icistat_burr_eval(const icistat_burr_params *m, const double *x, size_t n,
                                  double *pdf, double *cdf);
ICISTAT_API int icistat_burr_quantile(const icistat_burr_params *m, double p, double *out);
ICISTAT_API int icistat_burr_truncated_mean(const icistat_burr_params *m, double *out);
ICISTAT_API int icistat_burr_sample(const icistat_burr_params *m, uint64_t seed, size_t count,
                                    double *out);

/* ---- brute-force simulation ---- */

typedef struct icistat_sim_summary {
  uint64_t draws;
  double moments[4]; /* raw moments k = 1..4 */
  int has_samples;
} icistat_sim_summary;

ICISTAT_API int icistat_simulate(const icistat_scenario *s, int mode, size_t draws, uint64_t seed,
                                 unsigned threads, icistat_simulation **out);
ICISTAT_API void icistat_simulation_destroy(icistat_simulation *sim);
ICISTAT_API int icistat_simulation_summary(const icistat_simulation *sim,
                                           icistat_sim_summary *out);
ICISTAT_API int icistat_simulation_quantile(const icistat_simulation *sim, double q, double *out);
/* Empirical cdf at each x: exact from kept samples, else from the sketch. */
ICISTAT_API int icistat_simulation_cdf(const icistat_simulation *sim, const double *x, size_t n,
                                       double *out);

#ifdef __cplusplus
}
#endif

#endif
