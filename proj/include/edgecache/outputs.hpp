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

#include <iosfwd>
#include <string>
#include <vector>

#include "edgecache/harness.hpp"

namespace edgecache {

/// `scenario,model,slot,metric,value,stderr`, nine significant digits.
void write_metrics_csv(std::ostream& out, const ExperimentTable& table);

/// Whole-run mean and standard error per model and metric.
void write_summary(std::ostream& out, const ExperimentTable& table);

/// Line chart of one metric against the slot index, one series per model.
void write_slot_svg(std::ostream& out, const ExperimentTable& table, std::size_t metric);

/// metrics.csv, summary.txt and <metric>.svg under `dir`.
void emit_outputs(const ExperimentTable& table, const std::string& dir);

/// `axis,value,model,metric,mean,stderr`.
void write_sweep_csv(std::ostream& out, const std::string& axis, const std::vector<SweepPoint>& points);

/// sweep.csv, one <metric>.svg against the axis, and each point's own
/// outputs under <axis>_<value>/.
void emit_sweep_outputs(const std::string& axis, const std::vector<SweepPoint>& points,
                        const std::string& dir);

/// Fixed "%.9g" rendering, independent of the stream locale.
std::string format_number(double x);

}  // namespace edgecache
