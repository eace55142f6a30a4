// Copyright 2026 The edgecache Authors.
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

#include "edgecache/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

namespace edgecache {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (v.empty()) fail(ErrorKind::config, key + ": missing value");
  return v;
}

template <typename T>
T number(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    fail(ErrorKind::config, key + ": expected a number, got '" + v + "'");
  return out;
}

bool boolean(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true") return true;
  if (v == "false") return false;
  fail(ErrorKind::config, key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> list(const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const std::string item = trim(v.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(unquote(key, item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) fail(ErrorKind::config, key + ": empty list");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario", [](auto& c, auto& k, auto& v) { c.scenario = parse_scenario(unquote(k, v)); }},
      {"models", [](auto& c, auto& k, auto& v) { c.models = list(k, v); }},
      {"n_files", [](auto& c, auto& k, auto& v) { c.n_files = number<int>(k, v); }},
      {"cache_size", [](auto& c, auto& k, auto& v) { c.network.cache_size = number<int>(k, v); }},
      {"order", [](auto& c, auto& k, auto& v) { c.order = number<int>(k, v); }},
      {"window", [](auto& c, auto& k, auto& v) { c.window = number<int>(k, v); }},
      {"zipf_s", [](auto& c, auto& k, auto& v) { c.zipf_s = number<double>(k, v); }},
      {"runs", [](auto& c, auto& k, auto& v) { c.runs = number<int>(k, v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = number<std::uint64_t>(k, v); }},
      {"slots", [](auto& c, auto& k, auto& v) { c.slots = number<int>(k, v); }},
      {"bs_density", [](auto& c, auto& k, auto& v) { c.network.bs_density = number<double>(k, v); }},
      {"path_loss", [](auto& c, auto& k, auto& v) { c.network.path_loss = number<double>(k, v); }},
      {"bandwidth", [](auto& c, auto& k, auto& v) { c.network.bandwidth = number<double>(k, v); }},
      {"rate_threshold", [](auto& c, auto& k, auto& v) { c.network.rate_threshold = number<double>(k, v); }},
      {"mean_requests", [](auto& c, auto& k, auto& v) { c.traffic.mean_requests = number<double>(k, v); }},
      {"inter_arrival", [](auto& c, auto& k, auto& v) { c.traffic.inter_arrival = number<double>(k, v); }},
      {"slot_duration", [](auto& c, auto& k, auto& v) { c.traffic.slot_duration = number<double>(k, v); }},
      {"permute", [](auto& c, auto& k, auto& v) { c.stream.permute = boolean(k, v); }},
      {"concentration", [](auto& c, auto& k, auto& v) { c.stream.concentration = number<double>(k, v); }},
      {"block_len", [](auto& c, auto& k, auto& v) { c.block_len = number<int>(k, v); }},
      {"n_blocks", [](auto& c, auto& k, auto& v) { c.n_blocks = number<int>(k, v); }},
      {"kwik_alpha1", [](auto& c, auto& k, auto& v) { c.kwik.alpha1 = number<double>(k, v); }},
      {"kwik_alpha2", [](auto& c, auto& k, auto& v) { c.kwik.alpha2 = number<double>(k, v); }},
      {"kwik_max_history", [](auto& c, auto& k, auto& v) { c.kwik.max_history = number<int>(k, v); }},
      {"prob_floor", [](auto& c, auto& k, auto& v) { c.prob_floor = number<double>(k, v); }},
      {"ratings", [](auto& c, auto& k, auto& v) { c.ratings = unquote(k, v); }},
      {"slot_days", [](auto& c, auto& k, auto& v) { c.slot_days = number<double>(k, v); }},
      {"id_lo", [](auto& c, auto& k, auto& v) { c.id_lo = number<int>(k, v); }},
      {"id_hi", [](auto& c, auto& k, auto& v) { c.id_hi = number<int>(k, v); }},
      {"out_dir", [](auto& c, auto& k, auto& v) { c.out_dir = unquote(k, v); }},
      {"threads", [](auto& c, auto& k, auto& v) { c.threads = number<int>(k, v); }},
  };
  return table;
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::time_varying: return "time-varying";
    case Scenario::quasi: return "quasi";
    case Scenario::movielens: return "movielens";
    case Scenario::constant: return "constant";
  }
  return "?";
}

Scenario parse_scenario(const std::string& name) {
  for (auto s : {Scenario::time_varying, Scenario::quasi, Scenario::movielens, Scenario::constant})
    if (to_string(s) == name) return s;
  fail(ErrorKind::config, "scenario: unknown value '" + name + "'");
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) fail(ErrorKind::config, "unknown key '" + key + "'");
  it->second(cfg, key, value);
}

void ExperimentConfig::validate() const {
  if (n_files < 1) fail(ErrorKind::config, "n_files: must be >= 1");
  if (network.cache_size < 1 || network.cache_size > n_files)
    fail(ErrorKind::config, "cache_size: must lie in [1, n_files]");
  if (order < 1) fail(ErrorKind::config, "order: must be >= 1");
  if (window < order + 1) fail(ErrorKind::config, "window: must be >= order + 1");
  if (!(zipf_s >= 0.0)) fail(ErrorKind::config, "zipf_s: must be >= 0");
  if (runs < 1) fail(ErrorKind::config, "runs: must be >= 1");
  if (slots < 1) fail(ErrorKind::config, "slots: must be >= 1");
  if (!(traffic.mean_requests > 0.0)) fail(ErrorKind::config, "mean_requests: must be > 0");
  if (!(traffic.inter_arrival > 0.0)) fail(ErrorKind::config, "inter_arrival: must be > 0");
  if (!(traffic.slot_duration > 0.0)) fail(ErrorKind::config, "slot_duration: must be > 0");
  if (!(stream.concentration >= 0.0)) fail(ErrorKind::config, "concentration: must be >= 0");
  if (scenario == Scenario::quasi) {
    if (block_len <= order) fail(ErrorKind::config, "block_len: must exceed order");
    if (n_blocks < 1) fail(ErrorKind::config, "n_blocks: must be >= 1");
    if (block_len * n_blocks <= window) fail(ErrorKind::config, "block_len: stream shorter than window");
  }
  if (scenario == Scenario::movielens) {
    if (ratings.empty()) fail(ErrorKind::config, "ratings: path required for the movielens scenario");
    if (!(slot_days > 0.0)) fail(ErrorKind::config, "slot_days: must be > 0");
    if (id_hi < id_lo) fail(ErrorKind::config, "id_hi: must be >= id_lo");
  }
  if (!(prob_floor > 0.0 && prob_floor < 1.0)) fail(ErrorKind::config, "prob_floor: must lie in (0, 1)");
  if (models.empty()) fail(ErrorKind::config, "models: empty list");
  if (threads < 0) fail(ErrorKind::config, "threads: must be >= 0");
  KwikConfig k = kwik;
  k.order = order;
  k.validate();
  try {
    network.validate(n_files);
  } catch (const Error& e) {
    fail(ErrorKind::config, std::string("network: ") + e.what());
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::config, "line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(cfg, trim(body.substr(0, eq)), body.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

}  // namespace edgecache
