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

// Command-line front end. Talks to the library only through icistat.h.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "icistat/icistat.h"

using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
  int status;
  CliError(int s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(int status, const char* what) {
  if (status != ICISTAT_OK) {
    throw CliError(status, std::string(what) + ": " + icistat_last_error());
  }
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ScenarioPtr =
    std::unique_ptr<icistat_scenario, Deleter<icistat_scenario, icistat_scenario_destroy>>;
using TypicalSetPtr = std::unique_ptr<icistat_typical_set,
                                      Deleter<icistat_typical_set, icistat_typical_set_destroy>>;
using McpPtr = std::unique_ptr<icistat_mcp_result,
                               Deleter<icistat_mcp_result, icistat_mcp_result_destroy>>;
using SimPtr = std::unique_ptr<icistat_simulation,
                               Deleter<icistat_simulation, icistat_simulation_destroy>>;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes to the file when a path is given, else to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw CliError(ICISTAT_ERR_IO, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
};

void csv_row(std::ostream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out << ',';
    out << c;
    first = false;
  }
  out << '\n';
}

// Counts like 1e7 are accepted.
std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 1.0) || v > 1e15 || v != std::floor(v)) {
    throw CliError(ICISTAT_ERR_INVALID_ARGUMENT, std::string("bad ") + what + ": " + text);
  }
  return static_cast<std::size_t>(v);
}

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  bool log = false;
};

// lo:hi:n, with a trailing ":log" for log spacing.
std::optional<Grid> parse_grid(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log")) {
    throw CliError(ICISTAT_ERR_INVALID_ARGUMENT, "grid must be lo:hi:n[:log], got " + text);
  }
  Grid g;
  try {
    g.lo = std::stod(parts[0]);
    g.hi = std::stod(parts[1]);
  } catch (const std::exception&) {
    throw CliError(ICISTAT_ERR_INVALID_ARGUMENT, "bad grid bounds in " + text);
  }
  g.n = parse_count(parts[2], "grid size");
  g.log = parts.size() == 4;
  if (!(g.hi > g.lo) || g.lo < 0.0 || (g.log && !(g.lo > 0.0)) || g.n < 2) {
    throw CliError(ICISTAT_ERR_INVALID_ARGUMENT, "grid needs 0 <= lo < hi and n >= 2");
  }
  return g;
}

std::vector<double> grid_points(const Grid& g) {
  std::vector<double> x(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(g.n - 1);
    x[i] = g.log ? std::exp(std::log(g.lo) + t * (std::log(g.hi) - std::log(g.lo)))
                 : g.lo + t * (g.hi - g.lo);
  }
  return x;
}

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

// Scenario selection shared by several subcommands: a config file, then
// per-field overrides.
struct ScenarioOptions {
  std::string file;
  std::string reuse;
  std::optional<double> sigma_db;
  std::optional<double> radius;
  std::optional<double> gamma;
  std::optional<double> d_ref_mult;

  void attach(CLI::App* app) {
    app->add_option("--scenario", file, "scenario config file (key = value)");
    app->add_option("--reuse", reuse, "FR1 or FR3");
    app->add_option("--sigma-db", sigma_db, "shadowing standard deviation in dB");
    app->add_option("--radius", radius, "cell radius in meters");
    app->add_option("--gamma", gamma, "path-loss exponent");
    app->add_option("--d-ref-mult", d_ref_mult, "reference distance as a multiple of the radius");
  }

  icistat_scenario_config config(const GlobalOptions& g) const {
    icistat_scenario_config c;
    icistat_scenario_config_default(&c);
    if (!file.empty()) check(icistat_scenario_config_load(file.c_str(), &c), "scenario");
    if (!reuse.empty()) check(icistat_reuse_parse(reuse.c_str(), &c.reuse), "--reuse");
    if (sigma_db) c.sigma_db = *sigma_db;
    if (radius) c.cell_radius = *radius;
    if (gamma) c.gamma = *gamma;
    if (d_ref_mult) c.d_ref_multiplier = *d_ref_mult;
    if (g.seed) c.seed = *g.seed;
    return c;
  }
};

json config_json(const icistat_scenario_config& c) {
  return {{"cell_radius", c.cell_radius},     {"gamma", c.gamma},
          {"d_ref_multiplier", c.d_ref_multiplier}, {"sigma_db", c.sigma_db},
          {"reuse", icistat_reuse_name(c.reuse)}, {"seed", c.seed}};
}

ScenarioPtr make_scenario(const icistat_scenario_config& c) {
  icistat_scenario* s = nullptr;
  check(icistat_scenario_create(&c, &s), "scenario");
  return ScenarioPtr(s);
}

std::vector<double> lambdas_of(const icistat_scenario* s, std::vector<std::uint32_t>* aps) {
  const std::size_t n = icistat_scenario_interferer_count(s);
  std::vector<double> l(n);
  if (aps != nullptr) aps->resize(n);
  check(icistat_scenario_lambdas(s, l.data(), aps ? aps->data() : nullptr, n), "lambdas");
  return l;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---- subcommands ----

int run_layout(double radius, const std::string& out_path) {
  double x[ICISTAT_AP_COUNT], y[ICISTAT_AP_COUNT];
  int ring[ICISTAT_AP_COUNT];
  check(icistat_layout(radius, x, y, ring), "layout");
  Output out(out_path);
  csv_row(out.stream(), {"ap", "x", "y", "ring", "distance"});
  for (int i = 0; i < ICISTAT_AP_COUNT; ++i) {
    csv_row(out.stream(), {std::to_string(i), g17(x[i]), g17(y[i]), std::to_string(ring[i]),
                           g17(std::hypot(x[i], y[i]))});
  }
  return 0;
}

int run_lambdas(const icistat_scenario_config& c, const std::string& out_path) {
  const auto s = make_scenario(c);
  std::vector<std::uint32_t> aps;
  const auto l = lambdas_of(s.get(), &aps);
  Output out(out_path);
  csv_row(out.stream(), {"rank", "ap", "lambda"});
  for (std::size_t i = 0; i < l.size(); ++i) {
    csv_row(out.stream(), {std::to_string(i + 1), std::to_string(aps[i]), g17(l[i])});
  }
  if (out.to_file()) {
    double mean = 0.0;
    check(icistat_scenario_exact_mean(s.get(), &mean), "mean");
    print_json({{"scenario", config_json(c)}, {"interferers", l.size()}, {"sum", mean}});
  }
  return 0;
}

int run_moments(const icistat_scenario_config& c, int kmax) {
  const auto s = make_scenario(c);
  const auto l = lambdas_of(s.get(), nullptr);
  json single = json::array(), multi = json::array();
  for (int k = 1; k <= kmax; ++k) {
    double a = 0.0, b = 0.0;
    check(icistat_single_moment(k, c.sigma_db, &a), "single moment");
    check(icistat_multi_moment(k, l.data(), l.size(), c.sigma_db, &b), "multi moment");
    single.push_back({{"k", k}, {"value", a}});
    multi.push_back({{"k", k}, {"value", b}});
  }
  print_json({{"scenario", config_json(c)},
              {"single_interferer", single},
              {"total_gain", multi}});
  return 0;
}

int run_closed_form(const icistat_scenario_config& c, const std::string& grid_text,
                    const std::string& out_path) {
  const auto s = make_scenario(c);
  const auto l = lambdas_of(s.get(), nullptr);
  double mean = 0.0;
  check(icistat_scenario_exact_mean(s.get(), &mean), "mean");
  const Grid g = parse_grid(grid_text).value_or(Grid{0.0, 5.0 * mean, 501, false});
  const auto x = grid_points(g);
  std::vector<double> pdf(x.size()), cdf(x.size());
  check(icistat_hypoexp_eval(l.data(), l.size(), x.data(), x.size(), pdf.data(), cdf.data()),
        "closed form");
  Output out(out_path);
  csv_row(out.stream(), {"x", "pdf", "cdf"});
  for (std::size_t i = 0; i < x.size(); ++i) {
    csv_row(out.stream(), {g17(x[i]), g17(pdf[i]), g17(cdf[i])});
  }
  return 0;
}

int run_typical_set(double sigma_db, int intervals, int points, const GlobalOptions& g,
                    const std::string& out_path, const std::string& binary_path) {
  icistat_typical_set* raw = nullptr;
  check(icistat_typical_set_build(sigma_db, intervals, points, g.threads, &raw), "typical set");
  const TypicalSetPtr ts(raw);
  if (!binary_path.empty()) check(icistat_typical_set_save(ts.get(), binary_path.c_str()), "save");
  const std::size_t n = icistat_typical_set_size(ts.get());
  std::vector<double> a(n), p(n);
  std::vector<int> j(n);
  check(icistat_typical_set_data(ts.get(), a.data(), p.data(), j.data(), n), "data");
  if (!out_path.empty() || binary_path.empty()) {
    Output out(out_path);
    csv_row(out.stream(), {"interval", "amplitude", "probability"});
    for (std::size_t i = 0; i < n; ++i) {
      csv_row(out.stream(), {std::to_string(j[i]), g17(a[i]), g17(p[i])});
    }
    if (!out.to_file()) return 0;
  }
  json moments = json::array();
  for (int k = 1; k <= 3; ++k) {
    double m = 0.0, exact = 0.0;
    check(icistat_typical_set_moment(ts.get(), k, &m), "moment");
    check(icistat_single_moment(k, sigma_db, &exact), "moment");
    moments.push_back({{"k", k}, {"typical_set", m}, {"exact", exact},
                       {"relative_error", (m - exact) / exact}});
  }
  print_json({{"sigma_db", sigma_db}, {"intervals", intervals}, {"points", points},
              {"size", n}, {"moments", moments}});
  return 0;
}

struct McpOptions {
  int compelled = 2;
  int loaded = 3;
  std::string iterations = "20000";
  int intervals = 25;
  int points = 900;
  std::size_t bins = 200;
  std::string panel_out;
};

int run_mcp(const icistat_scenario_config& c, const McpOptions& o, const GlobalOptions& g,
            const std::string& out_path) {
  const auto s = make_scenario(c);
  icistat_mcp_config mc;
  icistat_mcp_config_default(&mc);
  mc.compelled = o.compelled;
  mc.loaded_intervals = o.loaded;
  mc.iterations = parse_count(o.iterations, "iteration count");
  mc.seed = c.seed;
  mc.intervals = o.intervals;
  mc.points = o.points;
  mc.histogram_bins = o.bins;
  mc.threads = g.threads;
  icistat_mcp_result* raw = nullptr;
  check(icistat_mcp_run(s.get(), &mc, &raw), "mcp");
  const McpPtr r(raw);
  if (!o.panel_out.empty()) check(icistat_mcp_panel_save(r.get(), o.panel_out.c_str()), "panel");
  const std::size_t bins = icistat_mcp_histogram_bins(r.get());
  std::vector<double> lo(bins), hi(bins), mass(bins);
  check(icistat_mcp_histogram(r.get(), lo.data(), hi.data(), mass.data(), bins), "histogram");
  icistat_mcp_summary sum;
  check(icistat_mcp_summary_get(r.get(), &sum), "summary");
  Output out(out_path);
  csv_row(out.stream(), {"bin_lo", "bin_hi", "mass"});
  for (std::size_t i = 0; i < bins; ++i) {
    csv_row(out.stream(), {g17(lo[i]), g17(hi[i]), g17(mass[i])});
  }
  const json summary = {{"scenario", config_json(c)},
                        {"iterations", sum.iterations},
                        {"compelled", o.compelled},
                        {"loaded_intervals", o.loaded},
                        {"mean", sum.mean},
                        {"mean_std_error", sum.mean_std_error},
                        {"exact_mean", sum.exact_mean},
                        {"relative_deviation", sum.relative_deviation},
                        {"diverged", sum.diverged != 0},
                        {"f_under", sum.f_under},
                        {"f_over", sum.f_over},
                        {"alpha", sum.alpha}};
  if (out.to_file()) print_json(summary);
  if (sum.diverged) {
    std::cerr << "warning: MCP mean deviates from the exact mean by "
              << 100.0 * sum.relative_deviation << "%\n";
  }
  return 0;
}

int run_model(const icistat_scenario_config& c, const std::string& grid_text, bool params_only,
              const std::string& out_path) {
  icistat_burr_params m;
  const int status = icistat_burr_model(c.reuse, c.sigma_db, &m);
  if (status != ICISTAT_OK) {
    const std::string message = icistat_last_error();
    double raw[5];
    json diag = {{"reuse", icistat_reuse_name(c.reuse)},
                 {"sigma_db", c.sigma_db},
                 {"error", message}};
    if (icistat_burr_raw_laws(c.reuse, c.sigma_db, raw) == ICISTAT_OK) {
      diag["raw_laws"] = {{"eta", raw[0]}, {"alpha", raw[1]}, {"k", raw[2]},
                          {"beta", raw[3]}, {"x_t", raw[4]}};
    }
    std::cerr << diag.dump(2) << '\n';
    throw CliError(status, "model: " + message);
  }
  const auto s = make_scenario(c);
  double target = 0.0, tmean = 0.0;
  check(icistat_scenario_exact_mean(s.get(), &target), "mean");
  check(icistat_burr_truncated_mean(&m, &tmean), "truncated mean");
  const json params = {{"reuse", icistat_reuse_name(c.reuse)},
                       {"sigma_db", c.sigma_db},
                       {"eta", m.eta},
                       {"alpha", m.alpha},
                       {"k", m.k},
                       {"beta", m.beta},
                       {"x_t", m.x_t},
                       {"A", m.A},
                       {"truncated_mean", tmean},
                       {"target_mean", target},
                       {"relative_deviation", (tmean - target) / target}};
  if (params_only) {
    Output out(out_path);
    out.stream() << params.dump(2) << '\n';
    return 0;
  }
  const Grid g = parse_grid(grid_text).value_or(Grid{0.0, m.x_t, 501, false});
  const auto x = grid_points(g);
  std::vector<double> pdf(x.size()), cdf(x.size());
  check(icistat_burr_eval(&m, x.data(), x.size(), pdf.data(), cdf.data()), "model");
  Output out(out_path);
  csv_row(out.stream(), {"x", "pdf", "cdf"});
  for (std::size_t i = 0; i < x.size(); ++i) {
    csv_row(out.stream(), {g17(x[i]), g17(pdf[i]), g17(cdf[i])});
  }
  if (out.to_file()) print_json(params);
  return 0;
}

int run_simulate(const icistat_scenario_config& c, const std::string& mode_text,
                 const std::string& draws_text, std::size_t bins, const GlobalOptions& g,
                 const std::string& out_path) {
  int mode = 0;
  if (mode_text == "exact") {
    mode = ICISTAT_SIM_EXACT;
  } else if (mode_text == "approx") {
    mode = ICISTAT_SIM_APPROX;
  } else {
    throw CliError(ICISTAT_ERR_INVALID_ARGUMENT, "mode must be exact or approx");
  }
  const auto s = make_scenario(c);
  icistat_simulation* raw = nullptr;
  check(icistat_simulate(s.get(), mode, parse_count(draws_text, "draw count"), c.seed, g.threads,
                         &raw),
        "simulate");
  const SimPtr sim(raw);
  icistat_sim_summary sum;
  check(icistat_simulation_summary(sim.get(), &sum), "summary");

  // Linear bins up to the 0.999 quantile, with the closed-form law alongside.
  double top = 0.0;
  check(icistat_simulation_quantile(sim.get(), 0.999, &top), "quantile");
  std::vector<double> edges(bins + 1), centers(bins);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = top * static_cast<double>(i) / static_cast<double>(bins);
  }
  for (std::size_t i = 0; i < bins; ++i) centers[i] = 0.5 * (edges[i] + edges[i + 1]);
  std::vector<double> ecdf(bins + 1), mpdf(bins), mcdf(bins);
  check(icistat_simulation_cdf(sim.get(), edges.data(), edges.size(), ecdf.data()), "cdf");
  const auto l = lambdas_of(s.get(), nullptr);
  std::vector<double> upper(edges.begin() + 1, edges.end());
  check(icistat_hypoexp_eval(l.data(), l.size(), centers.data(), bins, mpdf.data(), nullptr),
        "closed form");
  check(icistat_hypoexp_eval(l.data(), l.size(), upper.data(), bins, nullptr, mcdf.data()),
        "closed form");
  Output out(out_path);
  csv_row(out.stream(), {"x", "pdf", "cdf", "pdf_closed_form", "cdf_closed_form"});
  const double width = edges[1] - edges[0];
  for (std::size_t i = 0; i < bins; ++i) {
    const double lower = i == 0 ? 0.0 : ecdf[i];
    csv_row(out.stream(), {g17(centers[i]), g17((ecdf[i + 1] - lower) / width),
                           g17(ecdf[i + 1]), g17(mpdf[i]), g17(mcdf[i])});
  }
  if (out.to_file()) {
    print_json({{"scenario", config_json(c)},
                {"mode", mode_text},
                {"draws", sum.draws},
                {"moments", {sum.moments[0], sum.moments[1], sum.moments[2], sum.moments[3]}},
                {"exact_samples", sum.has_samples != 0}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intercell interference statistics"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--seed", global.seed, "master RNG seed (overrides the scenario seed)");
  app.add_option("--threads", global.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_flag_callback("--version", [] {
    std::cout << icistat_version() << '\n';
    throw CLI::Success();
  });
  app.fallthrough();

  std::string out_path;
  auto out_opt = [&](CLI::App* sub, const char* help) { sub->add_option("--out", out_path, help); };

  auto* layout = app.add_subcommand("layout", "AP positions of the 19-cell grid");
  double radius = 700.0;
  layout->add_option("--radius", radius, "cell radius in meters");
  out_opt(layout, "CSV output (ap,x,y,ring,distance)");

  ScenarioOptions scen;
  auto* lambdas = app.add_subcommand("lambdas", "average path losses of the interferers");
  scen.attach(lambdas);
  out_opt(lambdas, "CSV output (rank,ap,lambda)");

  auto* moments = app.add_subcommand("moments", "exact moments of single and total gain");
  scen.attach(moments);
  int kmax = 3;
  moments->add_option("--kmax", kmax, "highest moment order")->check(CLI::Range(1, 12));

  auto* closed = app.add_subcommand("closed-form-pdf", "hypoexponential pdf and cdf");
  scen.attach(closed);
  std::string grid;
  closed->add_option("--grid", grid, "lo:hi:n[:log]");
  out_opt(closed, "CSV output (x,pdf,cdf)");

  auto* typical = app.add_subcommand("typical-set", "single-interferer typical set");
  double ts_sigma = 0.0;
  int intervals = 25, points = 900;
  std::string binary_path;
  typical->add_option("--sigma-db", ts_sigma, "shadowing standard deviation in dB")->required();
  typical->add_option("--intervals", intervals, "partition intervals J");
  typical->add_option("--points", points, "points per interval P");
  typical->add_option("--binary", binary_path, "also write the binary form here");
  out_opt(typical, "CSV output (interval,amplitude,probability)");

  auto* mcp = app.add_subcommand("mcp", "Monte Carlo-panel histogram of the total gain");
  scen.attach(mcp);
  McpOptions mo;
  mcp->add_option("--iterations", mo.iterations, "iteration count");
  mcp->add_option("--compelled", mo.compelled, "compelled links M");
  mcp->add_option("--loaded", mo.loaded, "loaded interval cutoff");
  mcp->add_option("--intervals", mo.intervals, "partition intervals J");
  mcp->add_option("--points", mo.points, "points per interval P");
  mcp->add_option("--bins", mo.bins, "histogram bins");
  mcp->add_option("--panel-out", mo.panel_out, "binary panel set of iteration 0");
  out_opt(mcp, "CSV output (bin_lo,bin_hi,mass)");

  auto* model = app.add_subcommand("model", "truncated Burr model");
  scen.attach(model);
  bool params_only = false;
  model->add_option("--grid", grid, "lo:hi:n[:log]");
  model->add_flag("--params-only", params_only, "emit the parameter tuple as JSON");
  out_opt(model, "CSV output (x,pdf,cdf)");

  auto* simulate = app.add_subcommand("simulate", "brute-force Monte Carlo of the total gain");
  scen.attach(simulate);
  std::string mode = "exact", draws = "1000000";
  std::size_t sim_bins = 200;
  simulate->add_option("--mode", mode, "exact or approx");
  simulate->add_option("--draws", draws, "number of draws (1e7 style accepted)");
  simulate->add_option("--bins", sim_bins, "pdf bins")->check(CLI::Range(1, 100000));
  out_opt(simulate, "CSV output (x,pdf,cdf,pdf_closed_form,cdf_closed_form)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*layout) return run_layout(radius, out_path);
    if (*typical) return run_typical_set(ts_sigma, intervals, points, global, out_path, binary_path);
    const auto cfg = scen.config(global);
    if (*lambdas) return run_lambdas(cfg, out_path);
    if (*moments) return run_moments(cfg, kmax);
    if (*closed) return run_closed_form(cfg, grid, out_path);
    if (*mcp) return run_mcp(cfg, mo, global, out_path);
    if (*model) return run_model(cfg, grid, params_only, out_path);
    if (*simulate) return run_simulate(cfg, mode, draws, sim_bins, global, out_path);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
