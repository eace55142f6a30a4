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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "edgecache/core.hpp"
#include "edgecache/data.hpp"
#include "edgecache/kwik.hpp"

namespace edgecache {

enum class Scenario { time_varying, quasi, movielens, constant };

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& name);

/// Every setting of one experiment. Defaults are the evaluation setup:
/// N = 3, L = 2, d = 4, tau = 10, Zipf exponent 1.5.
struct ExperimentConfig {
  Scenario scenario = Scenario::time_varying;
  std::vector<std::string> models = {"op-ppm", "op-gpm", "op-rpm", "op-ipm", "op-asppm",
                                     "ol-ppm", "ol-gpm", "ol-rpm", "ol-ipm", "ol-asppm",
                                     "kwik-ppm", "kwik-gpm", "kwik-rpm", "kwik-ipm", "kwik-asppm"};
  int n_files = 3;
  int order = 4;
  int window = 10;
  double zipf_s = 1.5;
  int runs = 100;
  std::uint64_t seed = 1;
  int slots = 50;  // scored slots per replication (time-varying, constant)
  NetworkParams network;  // cache_size is L
  SlotTraffic traffic;
  StreamOptions stream{false, 100.0};
  int block_len = 200;
  int n_blocks = 3;
  KwikConfig kwik;
  double prob_floor = 1e-6;
  std::string ratings;
  double slot_days = 30.0;
  int id_lo = 1;
  int id_hi = 100;
  std::string out_dir = "out";
  int threads = 0;  // 0 keeps the OpenMP default

  /// Throws Error(config) naming the offending field.
  void validate() const;
};

/// Flat `key = value` text: numbers, true/false, "strings", and one-line
/// ["a", "b"] lists. `#` starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Applies a single key = value assignment; used by the parser and the CLI.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace edgecache
