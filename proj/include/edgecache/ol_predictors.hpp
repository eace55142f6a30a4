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

#include <vector>

#include "edgecache/core.hpp"

namespace edgecache {

/// Running convex combination p_{t+1} = c_t p_t + (1 - c_t) p_hat_t with
/// c_t = 1/t, i.e. the arithmetic mean of everything observed so far.
/// The ASP-based learner reduces to this one.
class PpmLearner {
 public:
  explicit PpmLearner(Eigen::Index n_files);

  const PopularityProfile& observe(const PopularityProfile& p);
  const PopularityProfile& prediction() const noexcept { return estimate_; }
  int steps() const noexcept { return t_; }

 private:
  PopularityProfile estimate_;
  int t_ = 0;
};

/// Square-root profile learner. The raw update z_t p_t + kappa_t p_hat_t is
/// normalized to the unit sphere and its pre-normalization norm becomes
/// kappa_{t+1}. Starts from the uniform unit vector with kappa_1 = 1.
class GpmLearner {
 public:
  explicit GpmLearner(Eigen::Index n_files);

  PopularityProfile observe(const SqrtProfile& root);
  const Vector& estimate() const noexcept { return estimate_; }
  PopularityProfile prediction() const;
  double kappa() const noexcept { return kappa_; }
  int steps() const noexcept { return t_; }

 private:
  Vector estimate_;
  double kappa_ = 1.0;
  int t_ = 0;
};

/// Geometric mixing of request counts, n_hat^(1 - c) n^c with c = 1/t, kept
/// as a running mean of log counts. Flooring happens only on readout.
class RpmLearner {
 public:
  explicit RpmLearner(Eigen::Index n_files);

  /// Counts below one are clamped to one before the log.
  Vector observe(const Vector& counts);
  const Vector& log_estimate() const noexcept { return log_estimate_; }
  Vector predicted_counts() const;
  PopularityProfile prediction() const;
  int steps() const noexcept { return t_; }

 private:
  Vector log_estimate_;
  int t_ = 0;
};

/// Running mean of information vectors -log p; readout exp(-x) renormalized.
class IpmLearner {
 public:
  IpmLearner(Eigen::Index n_files, double prob_floor = 1e-6);

  PopularityProfile observe(const PopularityProfile& p);
  const Vector& estimate() const noexcept { return estimate_; }
  PopularityProfile prediction() const;
  int steps() const noexcept { return t_; }

 private:
  Vector estimate_;
  double floor_;
  int t_ = 0;
};

enum class OlKind { ppm, gpm, rpm, ipm };

/// Predictions made before each observation, both in the model's loss domain
/// (p, sqrt p, log(n / n_max), -log p).
struct RegretTrace {
  OlKind kind = OlKind::ppm;
  std::vector<Vector> predictions;
  std::vector<Vector> observations;
};

struct RegretContext {
  int n_files = 3;
  double n_max = 2.0;
  double zipf_s = 1.5;
};

struct RegretReport {
  double regret = 0.0;
  double bound = 0.0;
};

/// Weighted loss of the learner minus that of the best fixed point in
/// hindsight, with weights 1/i (1 - 1/i for GPM). The comparator is the
/// weighted mean, normalized onto the unit sphere for GPM.
RegretReport measure_regret(const RegretTrace& trace, const RegretContext& ctx);

double regret_bound(OlKind kind, int horizon, const RegretContext& ctx);

RegretTrace trace_ppm(const std::vector<PopularityProfile>& stream);
RegretTrace trace_gpm(const std::vector<PopularityProfile>& stream);
RegretTrace trace_rpm(const std::vector<Vector>& counts, double n_max);
RegretTrace trace_ipm(const std::vector<PopularityProfile>& stream, double prob_floor = 1e-6);

}  // namespace edgecache
