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
#include <span>
#include <vector>

#include "edgecache/core.hpp"

namespace edgecache {

/// Scalars of the success-probability model for a PPP network of base
/// stations with Rayleigh fading. `A` collects interference from stations
/// caching the requested file, `B` from stations that do not, `C = pi*lambda`.
struct AspConstants {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  NetworkParams params;
};

/// Index sets of an optimal placement: cached surely (R), fractionally (P),
/// never (Z). Indices refer to the original file order.
struct IndexPartition {
  std::vector<int> R;
  std::vector<int> P;
  std::vector<int> Z;
  int budget = 0;
};

struct CachePolicy {
  Vector q;
  IndexPartition partition;
};

inline constexpr double kDefaultQuadTol = 1e-10;

AspConstants compute_constants(const NetworkParams& params, double quad_tol = kDefaultQuadTol);

/// Closed form of B through the Beta-function identity
/// int_0^inf u^(a-1)/(1+u) du = pi / sin(pi a).
double closed_form_B(const NetworkParams& params);

/// Interference-limited per-file success probability.
double g0(double q, const AspConstants& k);
double g0_derivative(double q, const AspConstants& k);

/// Per-file success probability with thermal noise, by quadrature.
double g_noisy(double q, const AspConstants& k, double quad_tol = kDefaultQuadTol);

/// Average success probability sum_l p_l g0(q_l).
double asp(const PopularityProfile& p, const Vector& q, const AspConstants& k);

IndexPartition partition_indices(const PopularityProfile& p, int budget, const AspConstants& k);

/// Closed-form maximizer of the average success probability under
/// sum(q) <= budget, 0 <= q <= 1.
CachePolicy optimal_placement(const PopularityProfile& p, int budget, const AspConstants& k);

/// Quadratic-form value of the optimum; must agree with asp(p, policy.q, k).
double optimal_asp_value(const PopularityProfile& p, const CachePolicy& policy,
                         const AspConstants& k);

/// Multi-start projected gradient ascent over the box-and-budget polytope.
/// Verification oracle for small N only.
CachePolicy oracle_placement(const PopularityProfile& p, int budget, const AspConstants& k,
                             double tol = 1e-15, std::uint64_t seed = 7, int starts = 10);

/// Euclidean projection onto {0 <= q <= 1, sum(q) <= budget}.
Vector project_box_budget(const Vector& v, double budget);

/// Analytical gap between the optimal ASP and that of a predicted placement
/// sharing the same index sets. Diagnostic only.
double asp_difference_bound(const PopularityProfile& p, const IndexPartition& partition,
                            const AspConstants& k);

/// Placement for a batch of profiles. Parallel over profiles; the serial
/// variant is the reference the parallel one is tested against.
std::vector<CachePolicy> optimal_placement_batch(std::span<const PopularityProfile> profiles,
                                                 int budget, const AspConstants& k);
std::vector<CachePolicy> optimal_placement_batch_serial(
    std::span<const PopularityProfile> profiles, int budget, const AspConstants& k);

}  // namespace edgecache
