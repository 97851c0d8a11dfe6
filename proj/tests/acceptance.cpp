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

// Acceptance run. Prints one PASS/FAIL line per criterion; detail lines are
// indented. Arguments select a subset of criteria, e.g. `acceptance 2 6`.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "icistat/burr_model.hpp"
#include "icistat/closed_form.hpp"
#include "icistat/error.hpp"
#include "icistat/mcp.hpp"
#include "icistat/propagation.hpp"
#include "icistat/scenario.hpp"
#include "icistat/simulator.hpp"
#include "icistat/typical_set.hpp"

using namespace icistat;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void note(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void note(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  std::printf("    ");
  std::vprintf(fmt, ap);
  std::printf("\n");
  va_end(ap);
  std::fflush(stdout);
}

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

Scenario scenario(Reuse reuse, double sigma_db) {
  ScenarioConfig c;
  c.reuse = reuse;
  c.sigma_db = sigma_db;
  return Scenario::build(c);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Typical sets are shared between criteria 3, 4 and 5.
std::map<double, TypicalSet>& typical_sets() {
  static std::map<double, TypicalSet> sets;
  return sets;
}

const TypicalSet& typical_set(double sigma_db) {
  auto& sets = typical_sets();
  auto it = sets.find(sigma_db);
  if (it == sets.end()) it = sets.emplace(sigma_db, build_typical_set(sigma_db)).first;
  return it->second;
}

// ---- criteria ----

bool criterion1() {
  const std::array<double, 18> table{6.467, 3.588, 1.708, 1.069, 0.767, 0.663,
                                     0.568, 0.426, 0.316, 0.307, 0.260, 0.219,
                                     0.188, 0.178, 0.158, 0.145, 0.118, 0.107};
  const std::array<double, 6> table_fr3{0.568, 0.426, 0.307, 0.219, 0.178, 0.158};
  const auto t0 = Clock::now();
  const auto fr1 = scenario(Reuse::FR1, 0.0);
  const auto fr3 = scenario(Reuse::FR3, 0.0);
  const double elapsed = seconds_since(t0);
  double worst1 = 0.0, worst3 = 0.0;
  for (std::size_t i = 0; i < 18; ++i) worst1 = std::max(worst1, rel(fr1.lambdas()[i], table[i]));
  for (std::size_t i = 0; i < 6; ++i) {
    worst3 = std::max(worst3, rel(fr3.lambdas()[i], table_fr3[i]));
  }
  std::ostringstream l;
  for (double v : fr1.lambdas()) l << ' ' << std::round(v * 1e4) / 1e4;
  note("FR1 lambdas:%s", l.str().c_str());
  note("worst relative error FR1 %.2e, FR3 %.2e; %.2f s", worst1, worst3, elapsed);
  return worst1 < 0.01 && worst3 < 0.01 && elapsed < 60.0;
}

bool criterion2() {
  struct Case {
    int k;
    double sigma, expect, tol;
  };
  bool ok = true;
  for (const Case& c : {Case{1, 0.0, 1.0, 1e-15}, Case{1, 6.0, 1.0, 1e-14},
                        Case{1, 12.0, 1.0, 1e-14}, Case{2, 0.0, 2.0, 1e-15},
                        Case{3, 0.0, 6.0, 1e-15}, Case{2, 12.0, 4.138e3, 1e-3},
                        Case{3, 12.0, 53.127e9, 1e-3}}) {
    const double v = single_moment(c.k, c.sigma);
    const bool pass = rel(v, c.expect) <= c.tol;
    note("single moment k=%d sigma=%g: %.6g (target %.6g) %s", c.k, c.sigma, v, c.expect,
           pass ? "ok" : "off");
    ok = ok && pass;
  }
  const double m1 = multi_moment(1, scenario(Reuse::FR1, 0.0).lambdas(), 0.0);
  const double m3 = multi_moment(1, scenario(Reuse::FR3, 0.0).lambdas(), 0.0);
  note("E{G} FR1 %.5f (17.25), FR3 %.5f (1.857)", m1, m3);
  return ok && rel(m1, 17.25) < 1e-3 && rel(m3, 1.857) < 1e-3;
}

bool criterion3() {
  bool ok = true;
  for (double sigma : {0.0, 3.0, 6.0, 9.0, 12.0}) {
    const auto t0 = Clock::now();
    const auto& set = typical_set(sigma);
    const double elapsed = seconds_since(t0);
    double worst = 0.0;
    std::ostringstream ratios;
    for (int k = 1; k <= 3; ++k) {
      const double r = set.moment(k) / single_moment(k, sigma);
      worst = std::max(worst, std::abs(r - 1.0));
      ratios << " m" << k << "/exact=" << r;
    }
    note("sigma %4.1f:%s; %.1f s", sigma, ratios.str().c_str(), elapsed);
    ok = ok && worst < 0.01 && elapsed < 300.0;
  }
  return ok;
}

McpResult timed_mcp(Reuse reuse, std::size_t iterations, double* elapsed) {
  const auto s = scenario(reuse, 12.0);
  const auto& set = typical_set(12.0);
  McpConfig cfg;
  cfg.iterations = iterations;
  cfg.threads = worker_threads();
  const auto t0 = Clock::now();
  auto r = run_mcp(s, cfg, set);
  *elapsed = seconds_since(t0);
  note("%s sigma 12, %zu iterations: mean %.5f +- %.5f vs %.5f (%+.3f%%), %.1f s",
         to_string(reuse), iterations, r.mean, r.mean_std_error, r.exact_mean,
         100.0 * r.relative_deviation, *elapsed);
  return r;
}

bool criterion4() {
  typical_set(12.0);
  bool ok = true;
  double t = 0.0;
  for (Reuse reuse : {Reuse::FR1, Reuse::FR3}) {
    const auto r = timed_mcp(reuse, 2000, &t);
    ok = ok && std::abs(r.relative_deviation) < 0.03 && t < 600.0;
  }
  const auto fr1 = timed_mcp(Reuse::FR1, 20000, &t);
  ok = ok && std::abs(fr1.mean - 17.25) / 17.25 < 0.015;
  const auto fr3 = timed_mcp(Reuse::FR3, 20000, &t);
  ok = ok && std::abs(fr3.mean - 1.857) / 1.857 < 0.005;
  return ok;
}

bool criterion5() {
  bool ok = true;
  const auto& set = typical_set(0.0);
  for (Reuse reuse : {Reuse::FR1, Reuse::FR3}) {
    const auto s = scenario(reuse, 0.0);
    McpConfig cfg;
    cfg.iterations = 200;
    cfg.threads = worker_threads();
    const auto r = run_mcp(s, cfg, set);
    const HypoExponential h({s.lambdas().begin(), s.lambdas().end()});
    const auto cdf = r.histogram.cdf_at_edges();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < cdf.size(); ++i) {
      worst = std::max(worst, std::abs(cdf[i] - h.cdf(r.histogram.edges[i])));
    }
    note("%s sigma 0, 200 iterations: sup |F_mcp - F_hypoexp| = %.4f", to_string(reuse), worst);
    ok = ok && worst < 0.02;
  }
  return ok;
}

bool criterion6() {
  ScenarioConfig c;
  c.sigma_db = 12.0;
  const auto one = Scenario::from_lambdas(c, {1.0});
  SimulationConfig cfg;
  cfg.draws = 10000000;
  cfg.keep_samples_up_to = 0;
  cfg.threads = worker_threads();
  const auto r = simulate(one, SimulationMode::approx, cfg);
  const double exact = single_moment(3, 12.0);
  note("1e7 plain draws: 3rd sample moment %.4g vs exact %.4g (ratio %.2e)",
         r.moments.moment(3), exact, r.moments.moment(3) / exact);
  note("2nd sample moment %.4g vs exact %.4g", r.moments.moment(2), single_moment(2, 12.0));
  return r.moments.moment(3) < 0.5 * exact;
}

bool criterion7() {
  bool ok = true;
  const double target = scenario(Reuse::FR1, 0.0).exact_mean();
  for (double sigma : {0.0, 3.0, 6.0, 9.0, 12.0}) {
    const auto m = model_for(Reuse::FR1, sigma);
    const double mass = truncated_mass(m);
    double worst = 0.0;
    for (int i = 1; i < 5000; ++i) {
      const double p = i / 5000.0;
      worst = std::max(worst, std::abs(truncated_cdf(m, truncated_quantile(m, p)) - p));
    }
    const double mean = truncated_mean(m);
    const double dev = (mean - target) / target;
    const bool pass = std::abs(mass - 1.0) < 1e-6 && worst < 1e-10 && std::abs(dev) <= 0.10;
    note("FR1 sigma %4.1f: eta %.3f alpha %.4f k %.4f beta %.4f x_t %.3f A %.5f | "
           "mass-1 %.1e, round trip %.1e, truncated mean %.3f vs %.3f (%+.1f%%) %s",
           sigma, m.eta, m.alpha, m.k, m.beta, m.x_t, m.A, mass - 1.0, worst, mean, target,
           100.0 * dev, pass ? "ok" : "off");
    ok = ok && pass;
  }
  const double target3 = scenario(Reuse::FR3, 0.0).exact_mean();
  for (double sigma : {0.0, 3.0, 6.0, 9.0, 12.0}) {
    try {
      const auto m = model_for(Reuse::FR3, sigma);
      const double mean = truncated_mean(m);
      note("FR3 sigma %4.1f: eta %.3f alpha %.4f k %.4f beta %.4f x_t %.4f, truncated mean "
             "%.4f vs %.4f (%+.1f%%) [reported only]",
             sigma, m.eta, m.alpha, m.k, m.beta, m.x_t, mean, target3,
             100.0 * (mean - target3) / target3);
    } catch (const Error& e) {
      note("FR3 sigma %4.1f: %s [reported only]", sigma, e.what());
    }
  }
  return ok;
}

struct FigureCase {
  const char* name;
  double ks = 0.0;
};

// Empirical pdf on linear bins next to the closed-form curve.
void write_figure(const fs::path& path, const std::vector<double>& sorted,
                  const std::function<double(double)>& model_pdf) {
  std::ofstream out(path);
  out << "x,pdf_simulated,pdf_closed_form\n";
  const double top = sorted[static_cast<std::size_t>(0.999 * (sorted.size() - 1))];
  const std::size_t bins = 200;
  const double width = top / bins;
  std::size_t at = 0;
  char line[128];
  for (std::size_t b = 0; b < bins; ++b) {
    const double hi = width * static_cast<double>(b + 1);
    const std::size_t start = at;
    while (at < sorted.size() && sorted[at] <= hi) ++at;
    const double x = hi - 0.5 * width;
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g\n", x,
                  static_cast<double>(at - start) / (sorted.size() * width), model_pdf(x));
    out << line;
  }
}

double ks_sorted(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    worst = std::max({worst, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return worst;
}

bool criterion8() {
  const std::size_t draws = 10000000;
  const fs::path dir = "figures";
  fs::create_directories(dir);
  const auto fr1 = scenario(Reuse::FR1, 0.0);
  const auto fr3 = scenario(Reuse::FR3, 0.0);

  std::vector<FigureCase> cases;
  // Single links: nearest and weakest FR1 interferer.
  for (auto [name, idx] : {std::pair{"fig5_nearest_ap", std::size_t{0}},
                           std::pair{"fig6_weakest_ap", std::size_t{17}}}) {
    const std::size_t ap = fr1.interferer_aps()[idx];
    const double lambda = fr1.lambdas()[idx];
    Rng rng = make_stream(42, 500 + idx);
    std::vector<double> g(draws);
    for (auto& v : g) {
      const Point2 p =
          sector_point_from_unit(fr1.layout(), uniform_open(rng), uniform_open(rng));
      v = normalized_pathloss(fr1.params(), fr1.layout().distance_to(ap, p)) *
          sample_rayleigh(rng);
    }
    std::sort(g.begin(), g.end());
    const auto cdf = [lambda](double x) { return -std::expm1(-x / lambda); };
    const auto pdf = [lambda](double x) { return std::exp(-x / lambda) / lambda; };
    cases.push_back({name, ks_sorted(g, cdf)});
    write_figure(dir / (std::string(name) + ".csv"), g, pdf);
  }
  for (auto [name, s] : {std::pair{"fig7_fr1_total", &fr1}, std::pair{"fig8_fr3_total", &fr3}}) {
    SimulationConfig cfg;
    cfg.draws = draws;
    cfg.threads = worker_threads();
    auto g = simulate(*s, SimulationMode::exact, cfg).samples;
    std::sort(g.begin(), g.end());
    const HypoExponential h({s->lambdas().begin(), s->lambdas().end()});
    cases.push_back({name, ks_sorted(g, [&](double x) { return h.cdf(x); })});
    write_figure(dir / (std::string(name) + ".csv"), g, [&](double x) { return h.pdf(x); });
  }
  bool ok = true;
  for (const auto& c : cases) {
    note("%s: sup cdf distance %.4f (%s 0.02)", c.name, c.ks, c.ks < 0.02 ? "<" : ">=");
    ok = ok && c.ks < 0.02;
  }
  const bool ordering = cases[3].ks < cases[2].ks;
  note("FR3 closer than FR1: %s; CSVs in %s", ordering ? "yes" : "no",
         fs::absolute(dir).string().c_str());
  return ok && ordering;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool criterion9() {
  bool ok = true;
  const fs::path work = "determinism";
  fs::remove_all(work);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"layout", "layout --out @/out.csv"},
      {"lambdas", "lambdas --reuse FR3 --out @/out.csv"},
      {"moments", "moments --sigma-db 12 --kmax 3"},
      {"closed-form-pdf", "closed-form-pdf --grid 0:60:200 --out @/out.csv"},
      {"typical-set", "typical-set --sigma-db 6 --intervals 6 --points 50 --out @/out.csv"},
      {"mcp", "mcp --reuse FR3 --sigma-db 6 --iterations 10 --out @/out.csv"},
      {"model", "model --sigma-db 6 --out @/out.csv"},
      {"model-params", "model --params-only --sigma-db 6 --out @/out.csv"},
      {"simulate", "simulate --mode exact --draws 1e5 --out @/out.csv"},
  };
  for (const auto& [name, args] : runs) {
    std::string outputs[2];
    for (int pass = 0; pass < 2; ++pass) {
      const fs::path dir = work / (name + std::to_string(pass));
      fs::create_directories(dir);
      std::string a = args;
      for (auto at = a.find('@'); at != std::string::npos; at = a.find('@')) {
        a.replace(at, 1, dir.string());
      }
      const std::string cmd = std::string(ICISTAT_CLI_PATH) + " --seed 7 " + a + " > " +
                              (dir / "stdout.txt").string() + " 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) {
        note("%s: command failed", name.c_str());
        ok = false;
      }
      outputs[pass] = slurp(dir / "stdout.txt") + "\x1f" + slurp(dir / "out.csv");
    }
    const bool same = outputs[0] == outputs[1] && outputs[0].size() > 1;
    if (!same) note("%s: outputs differ", name.c_str());
    ok = ok && same;
  }
  note("%zu subcommand invocations byte-identical on rerun: %s", runs.size(), ok ? "yes" : "no");

  const auto s = scenario(Reuse::FR1, 12.0);
  const auto& set = typical_set(12.0);
  McpConfig cfg;
  cfg.iterations = 64;
  cfg.threads = 1;
  const auto serial = run_mcp(s, cfg, set);
  cfg.threads = 4;
  const auto parallel = run_mcp(s, cfg, set);
  const double d = rel(parallel.mean, serial.mean);
  note("MCP mean serial %.17g, 4 threads %.17g, relative difference %.1e", serial.mean,
         parallel.mean, d);
  return ok && d <= 1e-9;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<bool()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && selected.count(id) == 0) continue;
    std::printf("criterion %d: running\n", id);
    std::fflush(stdout);
    const auto t0 = Clock::now();
    bool pass = false;
    try {
      pass = run();
    } catch (const std::exception& e) {
      note("exception: %s", e.what());
    }
    std::printf("%s criterion %d (%.1f s)\n", pass ? "PASS" : "FAIL", id, seconds_since(t0));
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
