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

#include "edgecache/core.hpp"

#include <cmath>
#include <sstream>

namespace edgecache {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

PopularityProfile::PopularityProfile(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0) fail(ErrorKind::invalid_argument, "empty profile");
  if (!values_.allFinite()) fail(ErrorKind::numerical, "non-finite profile entry");
  if (values_.minCoeff() < -kSimplexTol)
    fail(ErrorKind::invalid_argument, "negative profile entry");
  values_ = values_.cwiseMax(0.0);
  const double sum = values_.sum();
  if (std::abs(sum - 1.0) > kSimplexTol) {
    std::ostringstream msg;
    msg << "profile sums to " << sum << ", not 1";
    fail(ErrorKind::invalid_argument, msg.str());
  }
  values_ /= sum;
}

PopularityProfile PopularityProfile::normalized(Vector weights) {
  if (!weights.allFinite()) fail(ErrorKind::numerical, "non-finite profile weight");
  weights = weights.cwiseMax(0.0);
  const double sum = weights.sum();
  if (!(sum > 0.0)) fail(ErrorKind::numerical, "cannot normalize an all-zero vector");
  return PopularityProfile(weights / sum);
}

PopularityProfile PopularityProfile::uniform(Eigen::Index n) {
  return PopularityProfile(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

SqrtProfile PopularityProfile::sqrt() const { return SqrtProfile(values_.cwiseSqrt()); }

SqrtProfile::SqrtProfile(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0) fail(ErrorKind::invalid_argument, "empty sqrt profile");
  if (values_.minCoeff() < 0.0) fail(ErrorKind::invalid_argument, "negative sqrt profile entry");
}

PopularityProfile SqrtProfile::square() const {
  return PopularityProfile::normalized(values_.cwiseAbs2());
}

bool RequestMatrix::column_empty(Eigen::Index slot) const {
  return (counts.col(slot).array() == 0).all();
}

double NetworkParams::sinr_threshold() const {
  return std::exp2(rate_threshold / bandwidth) - 1.0;
}

void NetworkParams::validate(Eigen::Index n_files) const {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::config, what);
  };
  require(bs_density > 0.0, "bs_density must be positive");
  require(path_loss > 2.0, "path_loss must exceed 2");
  require(bandwidth > 0.0, "bandwidth must be positive");
  require(rate_threshold > 0.0, "rate_threshold must be positive");
  require(tx_power > 0.0, "tx_power must be positive");
  require(noise >= 0.0, "noise must be nonnegative");
  require(cache_size >= 1 && cache_size <= n_files, "cache_size must lie in [1, N]");
  require(sinr_threshold() > 0.0, "sinr threshold underflows to zero");
}

PopularityProfile normalize_column(std::span<const std::int64_t> counts) {
  Vector v(static_cast<Eigen::Index>(counts.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) fail(ErrorKind::data, "negative request count");
    v[static_cast<Eigen::Index>(i)] = static_cast<double>(counts[i]);
    total += v[static_cast<Eigen::Index>(i)];
  }
  if (total <= 0.0) fail(ErrorKind::data, "empty slot");
  return PopularityProfile(v / total);
}

PopularityProfile zipf_pmf(const ZipfSpec& spec) {
  if (spec.n_files < 1) fail(ErrorKind::invalid_argument, "zipf needs at least one file");
  if (!(spec.exponent >= 0.0) || !std::isfinite(spec.exponent))
    fail(ErrorKind::invalid_argument, "zipf exponent must be finite and nonnegative");
  Vector w(spec.n_files);
  for (int j = 0; j < spec.n_files; ++j) w[j] = std::pow(static_cast<double>(j + 1), -spec.exponent);
  return PopularityProfile(w / w.sum());
}

double mse(const PopularityProfile& truth, const Vector& estimate) {
  if (truth.size() != estimate.size()) fail(ErrorKind::invalid_argument, "length mismatch");
  return (truth.values() - estimate).squaredNorm();
}

double total_variation(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) fail(ErrorKind::invalid_argument, "length mismatch");
  return 0.5 * (a - b).cwiseAbs().sum();
}

std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over a golden-ratio stride
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace edgecache
