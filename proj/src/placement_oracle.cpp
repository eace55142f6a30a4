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

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "edgecache/ppp_asp.hpp"

namespace edgecache {
namespace {

constexpr int kIterationCap = 200000;
// Unit-step projected gradient residual; below ~1e-10 it is roundoff.
constexpr double kStationarityTol = 1e-9;

double objective(const PopularityProfile& p, const Vector& q, const AspConstants& k) {
  double total = 0.0;
  for (Eigen::Index l = 0; l < q.size(); ++l) total += p[l] * g0(q[l], k);
  return total;
}

Vector gradient(const PopularityProfile& p, const Vector& q, const AspConstants& k) {
  Vector g(q.size());
  for (Eigen::Index l = 0; l < q.size(); ++l) g[l] = p[l] * g0_derivative(q[l], k);
  return g;
}

double stationarity(const PopularityProfile& p, const Vector& q, const AspConstants& k,
                    double budget) {
  return (project_box_budget(q + gradient(p, q, k), budget) - q).lpNorm<Eigen::Infinity>();
}

// Spectral projected gradient ascent (Barzilai-Borwein step, nonmonotone
// Armijo backtracking) from one start.
Vector ascend(const PopularityProfile& p, Vector q, double budget, const AspConstants& k,
              double tol) {
  constexpr int kMemory = 10;
  constexpr double kArmijo = 1e-4;
  q = project_box_budget(q, budget);
  double f = objective(p, q, k);
  Vector g = gradient(p, q, k);
  double step = 1.0 / std::max(g.lpNorm<Eigen::Infinity>(), 1e-300);
  std::deque<double> recent{f};

  for (int it = 0; it < kIterationCap; ++it) {
    const Vector dir = project_box_budget(q + step * g, budget) - q;
    const double slope = g.dot(dir);
    if (dir.lpNorm<Eigen::Infinity>() == 0.0 || slope <= 0.0) {
      if (stationarity(p, q, k, budget) < kStationarityTol) return q;
      step = 1.0 / std::max(g.lpNorm<Eigen::Infinity>(), 1e-300);
      continue;
    }
    const double reference = *std::min_element(recent.begin(), recent.end());
    double t = 1.0;
    Vector trial = q + dir;
    double f_trial = objective(p, trial, k);
    // Nonmonotone acceptance against the worst of the recent objective values.
    while (f_trial < reference + kArmijo * t * slope) {
      t *= 0.5;
      if (t < 1e-20) break;
      trial = q + t * dir;
      f_trial = objective(p, trial, k);
    }
    const Vector s = trial - q;
    const Vector g_new = gradient(p, trial, k);
    const Vector y = g - g_new;  // ascent: curvature of -f
    const double sy = s.dot(y);
    step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : 1e12;

    const double change = std::abs(f_trial - f);
    q = trial;
    f = f_trial;
    g = g_new;
    recent.push_back(f);
    if (static_cast<int>(recent.size()) > kMemory) recent.pop_front();
    if (change < tol && stationarity(p, q, k, budget) < kStationarityTol) return q;
  }
  fail(ErrorKind::numerical, "placement oracle did not converge");
}

}  // namespace

Vector project_box_budget(const Vector& v, double budget) {
  Vector clipped = v.cwiseMax(0.0).cwiseMin(1.0);
  if (clipped.sum() <= budget) return clipped;
  // sum(clip(v - mu)) is nonincreasing in mu; bisect for the level hitting the budget.
  double lo = 0.0, hi = v.maxCoeff();
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double s = (v.array() - mid).cwiseMax(0.0).cwiseMin(1.0).sum();
    (s > budget ? lo : hi) = mid;
  }
  return (v.array() - hi).cwiseMax(0.0).cwiseMin(1.0).matrix();
}

CachePolicy oracle_placement(const PopularityProfile& p, int budget, const AspConstants& k,
                             double tol, std::uint64_t seed, int starts) {
  const auto n = p.size();
  if (n > 20) fail(ErrorKind::invalid_argument, "oracle is limited to N <= 20");
  if (budget < 1 || budget > n) fail(ErrorKind::invalid_argument, "cache budget must lie in [1, N]");

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector best;
  double best_f = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    Vector start(n);
    for (Eigen::Index i = 0; i < n; ++i) start[i] = unit(rng);
    const Vector q = ascend(p, start, budget, k, tol);
    const double f = objective(p, q, k);
    if (f > best_f) {
      best_f = f;
      best = q;
    }
  }

  CachePolicy policy;
  policy.q = best;
  policy.partition.budget = budget;
  for (int i = 0; i < static_cast<int>(n); ++i) {
    if (best[i] >= 1.0 - 1e-6)
      policy.partition.R.push_back(i);
    else if (best[i] <= 1e-6)
      policy.partition.Z.push_back(i);
    else
      policy.partition.P.push_back(i);
  }
  return policy;
}

}  // namespace edgecache
