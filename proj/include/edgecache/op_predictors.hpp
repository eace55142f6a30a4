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

#include <optional>
#include <string>
#include <vector>

#include "edgecache/core.hpp"
#include "edgecache/ppp_asp.hpp"

namespace edgecache {

enum class ModelKind { ppm, gpm, rpm, ipm, asppm };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

enum class NmaxPolicy {
  window_max,  // largest count in the window, at least 2
  fixed,       // OpConfig::n_max
};

struct OpConfig {
  int order = 4;
  int window = 10;
  ModelKind kind = ModelKind::ppm;
  double prob_floor = 1e-6;
  NmaxPolicy n_max_policy = NmaxPolicy::window_max;
  double n_max = 2.0;

  void validate() const;
};

/// The tau most recent slots in chronological order. `counts` (N x tau) is
/// required by RPM only.
struct HistoryWindow {
  std::vector<PopularityProfile> profiles;
  std::optional<CountMatrix> counts;
  int t = 0;
};

/// Lagged-regression design shared by every OP model. For a series s_1..s_tau
/// of m-vectors and order d, the target stacks s_{d+1..tau}; column k of the
/// regressor stacks the same slots lagged by k.
struct StackedDesign {
  Matrix H;
  Vector y;
};
StackedDesign stack_series(const std::vector<Vector>& series, int order);

/// Most recent d members of the series as columns, newest first.
Matrix recent_basis(const std::vector<Vector>& series, int order);

/// Convex autoregression in prediction space: min ||y - H c||^2 over
/// 1^T c = 1 with basis * c >= 0; returns basis * c.
Vector fit_convex_ar(const Matrix& H, const Vector& y, const Matrix& basis);

/// Same with the prediction confined to the unit ball instead of the simplex.
Vector fit_ball_ar(const Matrix& H, const Vector& y, const Matrix& basis);

PopularityProfile ppm_predict(const HistoryWindow& w, const OpConfig& cfg);
PopularityProfile gpm_predict(const HistoryWindow& w, const OpConfig& cfg);

struct RpmPrediction {
  Vector counts;  // floored predicted counts
  PopularityProfile profile;
};
RpmPrediction rpm_predict(const HistoryWindow& w, const OpConfig& cfg);

PopularityProfile ipm_predict(const HistoryWindow& w, const OpConfig& cfg);

PopularityProfile asppm_predict(const HistoryWindow& w, const OpConfig& cfg, const AspConstants& k,
                                int cache_size);

/// Dispatch on cfg.kind; RPM returns its profile.
PopularityProfile op_predict(const HistoryWindow& w, const OpConfig& cfg, const AspConstants& k,
                             int cache_size);

/// Floors at eps, renormalizes, returns -log p.
Vector information_vector(const PopularityProfile& p, double eps);
/// exp(-x) shifted by min(x) for range, then renormalized.
PopularityProfile from_information(const Vector& x);

/// Clamps to [0, 1] and renormalizes; uniform when nothing positive is left.
PopularityProfile clamp_to_profile(const Vector& x);

/// Normalized nonnegative counts; uniform when all are zero.
PopularityProfile profile_from_counts(const Vector& counts);

/// n_max under the configured policy for a count window.
double window_n_max(const CountMatrix& counts, const OpConfig& cfg);

}  // namespace edgecache
