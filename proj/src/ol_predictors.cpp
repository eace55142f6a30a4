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

#include "edgecache/ol_predictors.hpp"

#include <cmath>

#include "edgecache/op_predictors.hpp"

namespace edgecache {

PpmLearner::PpmLearner(Eigen::Index n_files) : estimate_(PopularityProfile::uniform(n_files)) {}

const PopularityProfile& PpmLearner::observe(const PopularityProfile& p) {
  if (p.size() != estimate_.size()) fail(ErrorKind::invalid_argument, "profile size mismatch");
  ++t_;
  const double c = 1.0 / t_;
  estimate_ = PopularityProfile::normalized(c * p.values() + (1.0 - c) * estimate_.values());
  return estimate_;
}

GpmLearner::GpmLearner(Eigen::Index n_files)
    : estimate_(Vector::Constant(n_files, 1.0 / std::sqrt(static_cast<double>(n_files)))) {}

PopularityProfile GpmLearner::observe(const SqrtProfile& root) {
  if (root.size() != estimate_.size()) fail(ErrorKind::invalid_argument, "profile size mismatch");
  ++t_;
  const double z = 1.0 - 1.0 / t_;
  const Vector raw = z * root.values() + kappa_ * estimate_;
  const double norm = raw.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorKind::numerical, "degenerate state");
  kappa_ = norm;
  estimate_ = raw / norm;
  return prediction();
}

PopularityProfile GpmLearner::prediction() const {
  return PopularityProfile::normalized(estimate_.cwiseAbs2());
}

RpmLearner::RpmLearner(Eigen::Index n_files) : log_estimate_(Vector::Zero(n_files)) {}

Vector RpmLearner::observe(const Vector& counts) {
  if (counts.size() != log_estimate_.size()) fail(ErrorKind::invalid_argument, "count size mismatch");
  ++t_;
  const double c = 1.0 / t_;
  log_estimate_ = c * counts.cwiseMax(1.0).array().log().matrix() + (1.0 - c) * log_estimate_;
  return predicted_counts();
}

Vector RpmLearner::predicted_counts() const {
  return (log_estimate_.array().exp() * (1.0 + 1e-12)).floor().matrix();
}

PopularityProfile RpmLearner::prediction() const {
  return profile_from_counts(predicted_counts());
}

IpmLearner::IpmLearner(Eigen::Index n_files, double prob_floor)
    : estimate_(information_vector(PopularityProfile::uniform(n_files), prob_floor)),
      floor_(prob_floor) {}

PopularityProfile IpmLearner::observe(const PopularityProfile& p) {
  if (p.size() != estimate_.size()) fail(ErrorKind::invalid_argument, "profile size mismatch");
  ++t_;
  const double c = 1.0 / t_;
  estimate_ = c * information_vector(p, floor_) + (1.0 - c) * estimate_;
  return prediction();
}

PopularityProfile IpmLearner::prediction() const { return from_information(estimate_); }

double regret_bound(OlKind kind, int horizon, const RegretContext& ctx) {
  const double T = horizon;
  const double tail = 2.0 - 1.0 / T;
  switch (kind) {
    case OlKind::ppm: return 2.0 * tail;
    case OlKind::gpm: return T - std::log(T) - 1.0;
    case OlKind::rpm: return 2.0 * ctx.n_files * std::log(ctx.n_max) * tail;
    case OlKind::ipm: {
      const double v = ctx.zipf_s * std::log(static_cast<double>(ctx.n_files));
      return 2.0 * ctx.n_files * v * v * tail;
    }
  }
  return 0.0;
}

RegretReport measure_regret(const RegretTrace& trace, const RegretContext& ctx) {
  const auto T = trace.observations.size();
  if (T == 0 || trace.predictions.size() != T) fail(ErrorKind::invalid_argument, "incomplete regret trace");
  auto weight = [&](std::size_t i) {
    const double step = static_cast<double>(i + 1);
    return trace.kind == OlKind::gpm ? 1.0 - 1.0 / step : 1.0 / step;
  };

  Vector mean = Vector::Zero(trace.observations.front().size());
  double total = 0.0;
  double learner = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double w = weight(i);
    learner += 0.5 * w * (trace.predictions[i] - trace.observations[i]).squaredNorm();
    mean += w * trace.observations[i];
    total += w;
  }
  if (total > 0.0) mean /= total;
  if (trace.kind == OlKind::gpm && mean.norm() > 0.0) mean.normalize();

  double comparator = 0.0;
  for (std::size_t i = 0; i < T; ++i)
    comparator += 0.5 * weight(i) * (mean - trace.observations[i]).squaredNorm();
  return {learner - comparator, regret_bound(trace.kind, static_cast<int>(T), ctx)};
}

RegretTrace trace_ppm(const std::vector<PopularityProfile>& stream) {
  RegretTrace out{OlKind::ppm, {}, {}};
  if (stream.empty()) return out;
  PpmLearner learner(stream.front().size());
  for (const auto& p : stream) {
    out.predictions.push_back(learner.prediction().values());
    out.observations.push_back(p.values());
    learner.observe(p);
  }
  return out;
}

RegretTrace trace_gpm(const std::vector<PopularityProfile>& stream) {
  RegretTrace out{OlKind::gpm, {}, {}};
  if (stream.empty()) return out;
  GpmLearner learner(stream.front().size());
  for (const auto& p : stream) {
    const SqrtProfile root = p.sqrt();
    out.predictions.push_back(learner.estimate());
    out.observations.push_back(root.values());
    learner.observe(root);
  }
  return out;
}

RegretTrace trace_rpm(const std::vector<Vector>& counts, double n_max) {
  RegretTrace out{OlKind::rpm, {}, {}};
  if (counts.empty()) return out;
  const double log_max = std::log(n_max);
  RpmLearner learner(counts.front().size());
  for (const auto& n : counts) {
    out.predictions.push_back(learner.log_estimate().array() - log_max);
    out.observations.push_back(n.cwiseMax(1.0).array().log() - log_max);
    learner.observe(n);
  }
  return out;
}

RegretTrace trace_ipm(const std::vector<PopularityProfile>& stream, double prob_floor) {
  RegretTrace out{OlKind::ipm, {}, {}};
  if (stream.empty()) return out;
  IpmLearner learner(stream.front().size(), prob_floor);
  for (const auto& p : stream) {
    out.predictions.push_back(learner.estimate());
    out.observations.push_back(information_vector(p, prob_floor));
    learner.observe(p);
  }
  return out;
}

}  // namespace edgecache
