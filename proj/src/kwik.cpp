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

#include "edgecache/kwik.hpp"

#include <cmath>

#include "edgecache/nnls.hpp"

namespace edgecache {

void KwikConfig::validate() const {
  if (order < 1) fail(ErrorKind::config, "kwik order: must be >= 1");
  if (!(alpha1 > 0.0)) fail(ErrorKind::config, "kwik_alpha1: must be > 0");
  if (!(alpha2 > 0.0)) fail(ErrorKind::config, "kwik_alpha2: must be > 0");
  if (max_history < order) fail(ErrorKind::config, "kwik_max_history: must be >= order");
}

AccuracyVectors accuracy_vectors(const Matrix& H, const Vector& x) {
  if (H.rows() == 0) fail(ErrorKind::invalid_argument, "empty history");
  if (H.cols() != x.size()) fail(ErrorKind::invalid_argument, "lag vector length mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H.transpose() * H);
  const Vector& lambda = eig.eigenvalues();  // ascending
  const Matrix& U = eig.eigenvectors();
  AccuracyVectors out{Vector::Zero(H.rows()), Vector::Zero(x.size()), 0};
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    const double proj = U.col(j).dot(x);
    if (lambda[j] >= 1.0) {
      out.q += H * U.col(j) * (proj / lambda[j]);
      ++out.k;
    } else {
      out.v += U.col(j) * proj;
    }
  }
  return out;
}

KwikChannel::KwikChannel(int order, int max_history) : order_(order), max_history_(max_history) {}

void KwikChannel::add(const Vector& lags, double target) {
  if (lags.size() != order_) fail(ErrorKind::invalid_argument, "lag vector length mismatch");
  rows_.push_back(lags);
  targets_.push_back(target);
  if (static_cast<int>(rows_.size()) > max_history_) {
    rows_.pop_front();
    targets_.pop_front();
  }
  dirty_ = true;
}

Matrix KwikChannel::history() const {
  Matrix H(rows(), order_);
  for (int i = 0; i < rows(); ++i) H.row(i) = rows_[static_cast<std::size_t>(i)].transpose();
  return H;
}

Vector KwikChannel::targets() const {
  Vector y(rows());
  for (int i = 0; i < rows(); ++i) y[i] = targets_[static_cast<std::size_t>(i)];
  return y;
}

void KwikChannel::refresh() const {
  if (!dirty_) return;
  Matrix gram = Matrix::Zero(order_, order_);
  Vector rhs = Vector::Zero(order_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    gram.noalias() += rows_[i] * rows_[i].transpose();
    rhs += targets_[i] * rows_[i];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  eigvals_ = eig.eigenvalues();
  eigvecs_ = eig.eigenvectors();
  coef_ = solve_sum_to_one_ls_gram(gram, rhs);
  dirty_ = false;
}

std::pair<double, double> KwikChannel::accuracy_norms(const Vector& lags) const {
  if (rows_.empty()) fail(ErrorKind::invalid_argument, "empty history");
  refresh();
  // ||q||^2 = x^T U_k Lambda_k^-1 U_k^T x because U^T H^T H U = Lambda.
  double q2 = 0.0, v2 = 0.0;
  for (Eigen::Index j = 0; j < eigvals_.size(); ++j) {
    const double proj = eigvecs_.col(j).dot(lags);
    if (eigvals_[j] >= 1.0)
      q2 += proj * proj / eigvals_[j];
    else
      v2 += proj * proj;
  }
  return {std::sqrt(q2), std::sqrt(v2)};
}

const Vector& KwikChannel::coefficients() const {
  if (rows_.empty()) fail(ErrorKind::invalid_argument, "empty history");
  refresh();
  return coef_;
}

bool KwikOutput::complete() const {
  for (const auto& v : values)
    if (!v) return false;
  return !values.empty();
}

KwikLearner::KwikLearner(Eigen::Index channels, KwikConfig cfg)
    : cfg_(cfg), pending_(static_cast<std::size_t>(channels)) {
  cfg_.validate();
  channels_.assign(static_cast<std::size_t>(channels), KwikChannel(cfg_.order, cfg_.max_history));
}

KwikOutput KwikLearner::step(const Vector& observation) {
  const auto n = static_cast<Eigen::Index>(channels_.size());
  if (observation.size() != n) fail(ErrorKind::invalid_argument, "observation size mismatch");
  if (!observation.allFinite()) fail(ErrorKind::numerical, "non-finite observation");

  for (Eigen::Index l = 0; l < n; ++l) {
    auto& slot = pending_[static_cast<std::size_t>(l)];
    if (slot) channels_[static_cast<std::size_t>(l)].add(*slot, observation[l]);
    slot.reset();
  }
  recent_.push_back(observation);
  if (static_cast<int>(recent_.size()) > cfg_.order) recent_.pop_front();

  KwikOutput out{std::vector<std::optional<double>>(static_cast<std::size_t>(n)),
                 std::vector<Vector>(static_cast<std::size_t>(n))};
  if (static_cast<int>(recent_.size()) < cfg_.order) {
    abstentions_ += n;
    return out;
  }

  for (Eigen::Index l = 0; l < n; ++l) {
    const auto idx = static_cast<std::size_t>(l);
    Vector lags(cfg_.order);
    for (int k = 0; k < cfg_.order; ++k) lags[k] = recent_[static_cast<std::size_t>(k)][l];
    const auto& channel = channels_[idx];
    bool known = false;
    if (channel.rows() > 0) {
      const auto [q_norm, v_norm] = channel.accuracy_norms(lags);
      known = q_norm <= cfg_.alpha1 && v_norm <= cfg_.alpha2;
    }
    if (known) {
      try {
        const Vector& c = channel.coefficients();
        out.values[idx] = c.dot(lags);
        out.coefficients[idx] = c;
      } catch (const Error&) {
        known = false;
      }
    }
    if (known) {
      ++predictions_;
    } else {
      ++abstentions_;
      pending_[idx] = lags;
    }
  }
  return out;
}

KwikPredictor::KwikPredictor(ModelKind kind, Eigen::Index n_files, KwikConfig cfg,
                             const AspConstants* k, int cache_size, double prob_floor)
    : kind_(kind),
      cfg_(cfg),
      learner_(kind == ModelKind::asppm ? 1 : n_files, cfg),
      constants_(k),
      cache_size_(cache_size),
      prob_floor_(prob_floor) {
  if (kind == ModelKind::asppm && (k == nullptr || cache_size < 1))
    fail(ErrorKind::invalid_argument, "ASP channel needs network constants and a cache size");
}

std::optional<PopularityProfile> KwikPredictor::step(const PopularityProfile& p, const Vector* counts) {
  Vector obs;
  switch (kind_) {
    case ModelKind::ppm: obs = p.values(); break;
    case ModelKind::gpm: obs = p.sqrt().values(); break;
    case ModelKind::ipm: obs = information_vector(p, prob_floor_); break;
    case ModelKind::rpm: {
      if (counts == nullptr) fail(ErrorKind::invalid_argument, "RPM needs request counts");
      const Vector logs = counts->cwiseMax(1.0).array().log();
      // Reference scale fixed at the first slot; sum-to-one fits do not depend on it.
      if (!have_ref_) {
        log_ref_ = std::log(std::max(2.0, counts->maxCoeff()));
        have_ref_ = true;
      }
      obs = logs.array() - log_ref_;
      break;
    }
    case ModelKind::asppm:
      obs = Vector::Constant(1, asp(p, optimal_placement(p, cache_size_, *constants_).q, *constants_));
      break;
  }
  recent_.push_back(p);
  if (static_cast<int>(recent_.size()) > cfg_.order) recent_.pop_front();

  const KwikOutput out = learner_.step(obs);
  if (!out.complete()) return std::nullopt;

  Vector est(static_cast<Eigen::Index>(out.values.size()));
  for (std::size_t l = 0; l < out.values.size(); ++l) est[static_cast<Eigen::Index>(l)] = *out.values[l];
  switch (kind_) {
    case ModelKind::ppm: return clamp_to_profile(est);
    case ModelKind::gpm: return clamp_to_profile(est.cwiseMax(0.0).cwiseAbs2());
    case ModelKind::ipm: return from_information(est);
    case ModelKind::rpm: {
      const Vector n = ((est.array() + log_ref_).min(700.0).exp() * (1.0 + 1e-12)).floor();
      return profile_from_counts(n);
    }
    case ModelKind::asppm: {
      const Vector& c = out.coefficients.front();
      Vector mix = Vector::Zero(p.size());
      for (int k = 0; k < cfg_.order; ++k) mix += c[k] * recent_[static_cast<std::size_t>(k)].values();
      return clamp_to_profile(mix);
    }
  }
  return std::nullopt;
}

}  // namespace edgecache
