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

#include "edgecache/ppp_asp.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>


namespace edgecache {
namespace {

// Adaptive 15-point Gauss-Kronrod with a relative tolerance.
template <typename F>
double integrate(F f, double a, double b, double tol) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 30, tol, &error);
  if (!std::isfinite(value) || error > std::max(1e3 * tol, 1e-12) * std::abs(value) + 1e-300)
    fail(ErrorKind::numerical, "quadrature failure");
  return value;
}

// int_0^{v_hi} v^-a (1-v)^(a-1) dv with v = w^(1/(1-a)), which removes the
// v^-a singularity at the origin.
double lower_beta_piece(double a, double v_hi, double tol) {
  const double m = 1.0 / (1.0 - a);
  const double w_hi = std::pow(v_hi, 1.0 - a);
  auto f = [&](double w) { return m * std::pow(1.0 - std::pow(w, m), a - 1.0); };
  return integrate(f, 0.0, w_hi, tol);
}

// int_{v_lo}^1 v^-a (1-v)^(a-1) dv with 1 - v = w^(1/a).
double upper_beta_piece(double a, double v_lo, double tol) {
  const double n = 1.0 / a;
  const double w_hi = std::pow(1.0 - v_lo, a);
  auto f = [&](double w) { return n * std::pow(1.0 - std::pow(w, n), -a); };
  return integrate(f, 0.0, w_hi, tol);
}

double prefactor(const NetworkParams& params) {
  const double a = 2.0 / params.path_loss;
  return 2.0 * std::numbers::pi * params.bs_density * std::pow(params.sinr_threshold(), a) /
         params.path_loss;
}

void require_geometry(const AspConstants& k) {
  if (!(k.A + k.C > k.B)) fail(ErrorKind::numerical, "degenerate geometry");
}

}  // namespace

AspConstants compute_constants(const NetworkParams& params, double quad_tol) {
  if (!(params.path_loss > 2.0)) fail(ErrorKind::numerical, "divergent integral");
  if (!(params.bs_density > 0.0)) fail(ErrorKind::invalid_argument, "bs_density must be positive");
  const double s0 = params.sinr_threshold();
  if (!(s0 > 0.0)) fail(ErrorKind::invalid_argument, "sinr threshold must be positive");

  // After u = (1-v)/v both integrals live on v in (0, 1]; A's lower limit
  // u = 1/s0 maps to v = s0 / (1 + s0).
  const double a = 2.0 / params.path_loss;
  const double pre = prefactor(params);
  const double b_int = lower_beta_piece(a, 0.5, quad_tol) + upper_beta_piece(a, 0.5, quad_tol);
  const double a_int = lower_beta_piece(a, s0 / (1.0 + s0), quad_tol);

  AspConstants k;
  k.A = pre * a_int;
  k.B = pre * b_int;
  k.C = std::numbers::pi * params.bs_density;
  k.params = params;

  const double reference = closed_form_B(params);
  if (!(std::abs(k.B - reference) <= 1e-6 * reference)) fail(ErrorKind::numerical, "quadrature failure");
  if (!(k.A > 0.0 && k.A < k.B)) fail(ErrorKind::numerical, "quadrature failure");
  return k;
}

double closed_form_B(const NetworkParams& params) {
  const double a = 2.0 / params.path_loss;
  return prefactor(params) * std::numbers::pi / std::sin(std::numbers::pi * a);
}

double g0(double q, const AspConstants& k) {
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorKind::invalid_argument, "caching probability outside [0,1]");
  return q * k.C / (q * k.A + (1.0 - q) * k.B + q * k.C);
}

double g0_derivative(double q, const AspConstants& k) {
  const double den = k.B + q * (k.A + k.C - k.B);
  return k.B * k.C / (den * den);
}

double g_noisy(double q, const AspConstants& k, double quad_tol) {
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorKind::invalid_argument, "caching probability outside [0,1]");
  if (q == 0.0) return 0.0;
  const double rate = q * k.A + (1.0 - q) * k.B + q * k.C;
  const double snr_term = k.params.sinr_threshold() * k.params.noise / k.params.tx_power;
  if (snr_term == 0.0) return q * k.C / rate;
  // x = r^2 = -ln(v) / rate turns the exponential weight into dv / rate.
  const double half_alpha = 0.5 * k.params.path_loss;
  auto f = [&](double v) {
    const double x = -std::log(v) / rate;
    return std::exp(-snr_term * std::pow(x, half_alpha));
  };
  return q * k.C / rate * integrate(f, 0.0, 1.0, quad_tol);
}

double asp(const PopularityProfile& p, const Vector& q, const AspConstants& k) {
  if (p.size() != q.size()) fail(ErrorKind::invalid_argument, "length mismatch");
  double total = 0.0;
  for (Eigen::Index l = 0; l < q.size(); ++l) total += p[l] * g0(q[l], k);
  return total;
}

IndexPartition partition_indices(const PopularityProfile& p, int budget, const AspConstants& k) {
  require_geometry(k);
  const int n = static_cast<int>(p.size());
  if (budget < 1 || budget > n) fail(ErrorKind::invalid_argument, "cache budget must lie in [1, N]");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return p[i] > p[j]; });

  IndexPartition out;
  out.budget = budget;
  if (budget == n) {
    out.R = order;
    std::sort(out.R.begin(), out.R.end());
    return out;
  }

  std::vector<double> root(order.size());
  for (int j = 0; j < n; ++j) root[static_cast<std::size_t>(j)] = std::sqrt(p[order[static_cast<std::size_t>(j)]]);

  const double gain = (k.A - k.B + k.C) / k.B;
  const double ratio = k.B / (k.A + k.C);
  constexpr double slack = 1e-12;

  // Sorted positions [0, r) form R, [n - z, n) form Z, the middle is P.
  auto threshold = [&](int r, int z) {
    double sum = 0.0;
    for (int j = r; j < n - z; ++j) sum += root[static_cast<std::size_t>(j)];
    const double eta = (n - z - r) + (budget - r) * gain;
    return std::pair{sum, sum / eta};
  };
  auto consistent = [&](int r, int z) {
    if (r > budget || r + z > n) return false;
    if (r + z == n) {
      // Empty P: the budget is spent on R or nothing else is worth caching.
      if (r == budget) return true;
      for (int j = r; j < n; ++j)
        if (root[static_cast<std::size_t>(j)] > 0.0) return false;
      return true;
    }
    if (r == budget) return false;
    const auto [sum, thr] = threshold(r, z);
    if (!(sum > 0.0)) return false;
    for (int j = 0; j < r; ++j)
      if (ratio * root[static_cast<std::size_t>(j)] < thr * (1.0 - 1e-9)) return false;
    for (int j = n - z; j < n; ++j)
      if (root[static_cast<std::size_t>(j)] > thr * (1.0 + 1e-9)) return false;
    for (int j = r; j < n - z; ++j) {
      const double s = root[static_cast<std::size_t>(j)];
      if (ratio * s > thr * (1.0 + 1e-9) || s < thr * (1.0 - 1e-9)) return false;
    }
    return true;
  };

  int r = 0, z = 0;
  for (bool changed = true; changed;) {
    changed = false;
    // Cache surely while the head of P still dominates the water level.
    while (r < n - z && r < budget) {
      const auto [sum, thr] = threshold(r, z);
      if (ratio * root[static_cast<std::size_t>(r)] >= thr * (1.0 - slack)) {
        ++r;
        changed = true;
      } else {
        break;
      }
    }
    if (r == budget) {
      z = n - r;
      break;
    }
    // Drop the tail of P while it sits below the water level.
    while (n - z > r) {
      const auto [sum, thr] = threshold(r, z);
      if (!(sum > 0.0)) {
        z = n - r;
        changed = false;
        break;
      }
      if (root[static_cast<std::size_t>(n - z - 1)] <= thr * (1.0 + slack)) {
        ++z;
        changed = true;
      } else {
        break;
      }
    }
  }

  if (!consistent(r, z)) {
    // The greedy scan missed a KKT point; search the contiguous sorted blocks.
    bool found = false;
    for (int rr = 0; rr <= budget && !found; ++rr)
      for (int zz = 0; rr + zz <= n && !found; ++zz)
        if (consistent(rr, zz)) {
          r = rr;
          z = zz;
          found = true;
        }
    if (!found) fail(ErrorKind::numerical, "no KKT-consistent partition");
  }

  for (int j = 0; j < n; ++j) {
    const int idx = order[static_cast<std::size_t>(j)];
    if (j < r)
      out.R.push_back(idx);
    else if (j >= n - z)
      out.Z.push_back(idx);
    else
      out.P.push_back(idx);
  }
  std::sort(out.R.begin(), out.R.end());
  std::sort(out.P.begin(), out.P.end());
  std::sort(out.Z.begin(), out.Z.end());
  return out;
}

CachePolicy optimal_placement(const PopularityProfile& p, int budget, const AspConstants& k) {
  IndexPartition part = partition_indices(p, budget, k);
  CachePolicy policy;
  policy.q = Vector::Zero(p.size());
  for (int i : part.R) policy.q[i] = 1.0;

  if (!part.P.empty()) {
    double sum = 0.0;
    for (int i : part.P) sum += std::sqrt(p[i]);
    const double eta = static_cast<double>(part.P.size()) +
                       (budget - static_cast<double>(part.R.size())) * (k.A - k.B + k.C) / k.B;
    const double scale = k.B / (k.A + k.C - k.B);
    IndexPartition cleaned;
    cleaned.budget = budget;
    cleaned.R = part.R;
    cleaned.Z = part.Z;
    for (int i : part.P) {
      const double qi = scale * (eta * std::sqrt(p[i]) / sum - 1.0);
      if (qi >= 1.0 - 1e-12) {
        policy.q[i] = 1.0;
        cleaned.R.push_back(i);
      } else if (qi <= 1e-12) {
        policy.q[i] = 0.0;
        cleaned.Z.push_back(i);
      } else {
        policy.q[i] = qi;
        cleaned.P.push_back(i);
      }
    }
    std::sort(cleaned.R.begin(), cleaned.R.end());
    std::sort(cleaned.Z.begin(), cleaned.Z.end());
    part = std::move(cleaned);
  }
  policy.partition = std::move(part);
  return policy;
}

double optimal_asp_value(const PopularityProfile& p, const CachePolicy& policy,
                         const AspConstants& k) {
  require_geometry(k);
  const auto& part = policy.partition;
  if (part.R.size() + part.P.size() + part.Z.size() != static_cast<std::size_t>(p.size()))
    fail(ErrorKind::invalid_argument, "partition does not cover all files");
  for (int i : part.R)
    if (policy.q[i] != 1.0) fail(ErrorKind::invalid_argument, "partition inconsistent with q");
  for (int i : part.Z)
    if (policy.q[i] != 0.0) fail(ErrorKind::invalid_argument, "partition inconsistent with q");

  // p_bar^T Zbar p_bar with Zbar = diag((A+C-B)/(A+C) I_R, I - 11^T/eta, 0_Z).
  double form = 0.0;
  for (int i : part.R) form += (k.A + k.C - k.B) / (k.A + k.C) * p[i];
  if (!part.P.empty()) {
    double sum = 0.0, mass = 0.0;
    for (int i : part.P) {
      sum += std::sqrt(p[i]);
      mass += p[i];
    }
    const double eta = static_cast<double>(part.P.size()) +
                       (part.budget - static_cast<double>(part.R.size())) * (k.A - k.B + k.C) / k.B;
    form += mass - sum * sum / eta;
  }
  return k.C / (k.A + k.C - k.B) * form;
}

double asp_difference_bound(const PopularityProfile& p, const IndexPartition& partition,
                            const AspConstants& k) {
  require_geometry(k);
  if (partition.P.empty()) fail(ErrorKind::invalid_argument, "bound needs a nonempty P set");
  double sum = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (int i : partition.P) {
    const double s = std::sqrt(p[i]);
    sum += s;
    smallest = std::min(smallest, s);
  }
  if (!(smallest > 0.0)) fail(ErrorKind::numerical, "degenerate profile");
  const double n_p = static_cast<double>(partition.P.size());
  const double eta =
      n_p + (partition.budget - static_cast<double>(partition.R.size())) * (k.A - k.B + k.C) / k.B;
  double mass_r = 0.0;
  for (int i : partition.R) mass_r += p[i];
  return k.C / (k.A + k.C - k.B) / eta * (-n_p + sum / smallest) - k.B / (k.A + k.C) * mass_r;
}

std::vector<CachePolicy> optimal_placement_batch_serial(
    std::span<const PopularityProfile> profiles, int budget, const AspConstants& k) {
  std::vector<CachePolicy> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) out.push_back(optimal_placement(p, budget, k));
  return out;
}

std::vector<CachePolicy> optimal_placement_batch(std::span<const PopularityProfile> profiles,
                                                 int budget, const AspConstants& k) {
  std::vector<CachePolicy> out(profiles.size());
  std::exception_ptr error;
  const auto n = static_cast<std::ptrdiff_t>(profiles.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = optimal_placement(profiles[static_cast<std::size_t>(i)], budget, k);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace edgecache
