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

#include "icistat/scenario_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "icistat/error.hpp"

namespace icistat {

namespace {

constexpr std::array<const char*, 6> kFields{"cell_radius", "gamma", "d_ref_multiplier",
                                             "sigma_db",    "reuse", "seed"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& source, int line) {
  return source + ":" + std::to_string(line) + ": ";
}

double parse_double(const std::string& text, const std::string& at) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    fail(Errc::parse_error, at + "expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& at) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    fail(Errc::parse_error, at + "expected an unsigned integer, got '" + text + "'");
  }
  return v;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ScenarioConfig parse_scenario_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::pair<std::string, int>> values;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      fail(Errc::parse_error, where(source, line) + "expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (std::find(kFields.begin(), kFields.end(), key) == kFields.end()) {
      fail(Errc::parse_error, where(source, line) + "unknown field '" + key + "'");
    }
    if (values.count(key) != 0) {
      fail(Errc::parse_error, where(source, line) + "duplicate field '" + key + "'");
    }
    values[key] = {value, line};
  }
  if (in.bad()) fail(Errc::io_error, "cannot read " + source);
  for (const char* f : kFields) {
    if (values.count(f) == 0) fail(Errc::parse_error, source + ": missing field '" + f + "'");
  }
  auto num = [&](const char* key) {
    const auto& [text, at] = values[key];
    return parse_double(text, where(source, at));
  };
  ScenarioConfig c;
  c.cell_radius = num("cell_radius");
  c.gamma = num("gamma");
  c.d_ref_multiplier = num("d_ref_multiplier");
  c.sigma_db = num("sigma_db");
  {
    const auto& [text, at] = values["reuse"];
    try {
      c.reuse = parse_reuse(text.c_str());
    } catch (const Error& e) {
      fail(Errc::parse_error, where(source, at) + e.what());
    }
  }
  {
    const auto& [text, at] = values["seed"];
    c.seed = parse_u64(text, where(source, at));
  }
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open scenario file " + path);
  return parse_scenario_config(in, path);
}

std::string format_scenario_config(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "cell_radius = " << g17(c.cell_radius) << "\n"
      << "gamma = " << g17(c.gamma) << "\n"
      << "d_ref_multiplier = " << g17(c.d_ref_multiplier) << "\n"
      << "sigma_db = " << g17(c.sigma_db) << "\n"
      << "reuse = " << to_string(c.reuse) << "\n"
      << "seed = " << c.seed << "\n";
  return out.str();
}

void save_scenario_config(const std::string& path, const ScenarioConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write scenario file " + path);
  out << format_scenario_config(config);
  if (!out) fail(Errc::io_error, "write failed for " + path);
}

std::string canonical_key(const ScenarioConfig& c) {
  return "R=" + g17(c.cell_radius) + ";gamma=" + g17(c.gamma) +
         ";dref=" + g17(c.d_ref_multiplier) + ";sigma=" + g17(c.sigma_db) +
         ";reuse=" + to_string(c.reuse) + ";seed=" + std::to_string(c.seed);
}

}  // namespace icistat
