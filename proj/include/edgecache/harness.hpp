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

#include <array>
#include <string>
#include <vector>

#include "edgecache/config.hpp"

namespace edgecache {

inline constexpr std::array<const char*, 3> kMetricNames = {"mse", "asp_diff", "asp_diff_true_eval"};

enum class Family { op, ol, kwik };

/// A model label such as "op-ppm", "ol-gpm" or "kwik-asppm".
struct ModelSpec {
  Family family = Family::op;
  ModelKind kind = ModelKind::ppm;
  std::string label;
};
ModelSpec parse_model(const std::string& label);

struct Stat {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Replication means of every (model, metric, slot), plus whole-run means:
/// the per-replication slot average, then its mean and standard error.
struct ExperimentTable {
  std::string scenario;
  std::vector<std::string> models;
  int slots = 0;
  int replications = 0;                 // successful ones
  std::vector<std::string> failures;    // "replication r: message"
  // [model][metric][slot]
  std::vector<std::array<std::vector<Stat>, 3>> per_slot;
  // [model][metric]
  std::vector<std::array<Stat, 3>> overall;

  double mean(const std::string& model, const std::string& metric) const;
};

/// Runs all replications, in parallel over replications. Output is
/// independent of the thread count.
ExperimentTable run_experiment(const ExperimentConfig& cfg);
/// Single-threaded reference with identical results.
ExperimentTable run_experiment_serial(const ExperimentConfig& cfg);

struct SweepPoint {
  double value = 0.0;
  ExperimentTable table;
};

/// One run_experiment per value of `axis` (tau, n or s), same base seed.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const std::string& axis,
                                  const std::vector<double>& values);

/// Copy of cfg with the sweep axis set to `value`.
ExperimentConfig apply_axis(ExperimentConfig cfg, const std::string& axis, double value);

}  // namespace edgecache
