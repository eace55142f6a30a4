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
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace edgecache {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using Rng = std::mt19937_64;

/// Tolerance on the unit-sum constraint of a probability vector.
inline constexpr double kSimplexTol = 1e-9;

enum class ErrorKind { invalid_argument, config, data, numerical };

/// Library error. The kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

class SqrtProfile;

/// Probability vector over N contents for one slot.
///
/// Construction renormalizes inputs whose sum is within kSimplexTol of one
/// and rejects anything else, so a live instance always satisfies the
/// simplex invariants.
class PopularityProfile {
 public:
  explicit PopularityProfile(Vector values);

  /// Clamps negatives to zero and rescales to unit sum. Throws on an
  /// all-zero or non-finite input.
  static PopularityProfile normalized(Vector weights);
  static PopularityProfile uniform(Eigen::Index n);

  const Vector& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }

  SqrtProfile sqrt() const;

  bool operator==(const PopularityProfile&) const = default;

 private:
  Vector values_;
};

/// Entrywise square root of a profile; a unit vector in the nonnegative orthant.
class SqrtProfile {
 public:
  explicit SqrtProfile(Vector values);

  const Vector& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }

  PopularityProfile square() const;

 private:
  Vector values_;
};

/// Requests per content (rows) per slot (columns).
struct RequestMatrix {
  CountMatrix counts;
  double slot_duration = 1.0;

  Eigen::Index n_files() const { return counts.rows(); }
  Eigen::Index n_slots() const { return counts.cols(); }
  bool column_empty(Eigen::Index slot) const;
};

struct NetworkParams {
  double bs_density = 200.0;
  double path_loss = 3.5;
  double bandwidth = 24000.0;    // Hz
  double rate_threshold = 1.0;   // bits/s
  double tx_power = 1.0;         // W
  double noise = 0.0;            // W
  int cache_size = 2;

  /// 2^(R0/W) - 1
  double sinr_threshold() const;
  void validate(Eigen::Index n_files) const;
};

struct ZipfSpec {
  int n_files = 3;
  double exponent = 1.5;
};

struct MetricRecord {
  std::string model;
  int slot = 0;
  double mse = 0.0;
  double asp_diff = 0.0;
  double asp_diff_true_eval = 0.0;
};

PopularityProfile normalize_column(std::span<const std::int64_t> counts);
PopularityProfile zipf_pmf(const ZipfSpec& spec);

/// Squared Euclidean distance.
double mse(const PopularityProfile& truth, const Vector& estimate);

double total_variation(const Vector& a, const Vector& b);

/// Derives an independent stream seed from a base seed and a stream index.
std::uint64_t split_seed(std::uint64_t base, std::uint64_t index);

}  // namespace edgecache
