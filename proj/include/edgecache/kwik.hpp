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

#include <deque>
#include <optional>
#include <vector>

#include "edgecache/core.hpp"
#include "edgecache/op_predictors.hpp"
#include "edgecache/ppp_asp.hpp"

namespace edgecache {

struct KwikConfig {
  int order = 4;
  double alpha1 = 0.5;  // bound on ||q||
  double alpha2 = 0.5;  // bound on ||v||
  int max_history = 512;

  void validate() const;
};

/// Coverage of a query x by the history H. With H^T H = U diag(lambda) U^T and
/// k eigenvalues >= 1, q = H U_k Lambda_k^-1 U_k^T x measures how strongly the
/// fit would lean on individual rows; v is the part of x in the
/// poorly-sampled eigenspace.
struct AccuracyVectors {
  Vector q;
  Vector v;
  int k = 0;
};
AccuracyVectors accuracy_vectors(const Matrix& H, const Vector& x);

/// History of one observable: d-lag rows in chronological order and the
/// value that followed each.
class KwikChannel {
 public:
  KwikChannel(int order, int max_history);

  /// Norms of (q, v) for a lag vector, from the cached eigendecomposition.
  std::pair<double, double> accuracy_norms(const Vector& lags) const;

  /// Sum-to-one coefficients fitted on the whole history, aligned with the
  /// lag vector (last entry multiplies the newest value).
  const Vector& coefficients() const;

  void add(const Vector& lags, double target);
  int rows() const noexcept { return static_cast<int>(targets_.size()); }
  Matrix history() const;
  Vector targets() const;

 private:
  void refresh() const;

  int order_;
  int max_history_;
  std::deque<Vector> rows_;
  std::deque<double> targets_;
  mutable bool dirty_ = true;
  mutable Matrix eigvecs_;
  mutable Vector eigvals_;
  mutable Vector coef_;
};

struct KwikOutput {
  std::vector<std::optional<double>> values;  // nullopt is an abstention
  std::vector<Vector> coefficients;           // empty where abstained
  bool complete() const;
};

/// Per-channel abstain-or-predict learner. step() takes the observation of
/// slot t and returns the forecasts for slot t+1. A channel that abstains
/// has its lag vector added to its history once slot t+1 is observed.
class KwikLearner {
 public:
  KwikLearner(Eigen::Index channels, KwikConfig cfg);

  KwikOutput step(const Vector& observation);

  const KwikChannel& channel(Eigen::Index l) const { return channels_[static_cast<std::size_t>(l)]; }
  long abstentions() const noexcept { return abstentions_; }
  long predictions() const noexcept { return predictions_; }

 private:
  KwikConfig cfg_;
  std::vector<KwikChannel> channels_;
  std::deque<Vector> recent_;
  std::vector<std::optional<Vector>> pending_;
  long abstentions_ = 0;
  long predictions_ = 0;
};

/// KWIK learner over one model's observable: p, sqrt p, log(n / n_ref), -log p,
/// or a single ASP channel whose coefficients are applied to the profiles.
class KwikPredictor {
 public:
  KwikPredictor(ModelKind kind, Eigen::Index n_files, KwikConfig cfg, const AspConstants* k = nullptr,
                int cache_size = 0, double prob_floor = 1e-6);

  /// Feeds slot t; returns the forecast for t+1, or nullopt if any channel
  /// abstained. `counts` is required for RPM.
  std::optional<PopularityProfile> step(const PopularityProfile& p, const Vector* counts = nullptr);

  const KwikLearner& learner() const noexcept { return learner_; }

 private:
  ModelKind kind_;
  KwikConfig cfg_;
  KwikLearner learner_;
  const AspConstants* constants_;
  int cache_size_;
  double prob_floor_;
  double log_ref_ = 0.0;
  bool have_ref_ = false;
  std::deque<PopularityProfile> recent_;
};

}  // namespace edgecache
