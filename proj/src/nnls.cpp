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

#include "edgecache/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace edgecache {
namespace {

constexpr double kRcondFloor = 1e-12;

Matrix restrict(const Matrix& m, const std::vector<int>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = m(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  return out;
}

Vector restrict(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) out[static_cast<Eigen::Index>(a)] = v[idx[a]];
  return out;
}

// Cholesky of a Gram block, regularized when it is numerically singular.
Eigen::LLT<Matrix> factor(Matrix block, double ridge) {
  Eigen::LLT<Matrix> llt(block);
  if (llt.info() != Eigen::Success || llt.rcond() < kRcondFloor) {
    block.diagonal().array() += ridge;
    llt.compute(block);
    if (llt.info() != Eigen::Success) fail(ErrorKind::numerical, "singular Gram block");
  }
  return llt;
}

// Solution of the subproblem restricted to the free set, with the
// multiplier of 1^T x = 1 when `sum_to_one` holds and zero otherwise.
struct Subproblem {
  Vector x;
  double lambda = 0.0;
};

Subproblem solve_free_set(const Matrix& gram, const Vector& rhs, const std::vector<int>& free,
                          bool sum_to_one, double ridge, double shift) {
  Matrix block = restrict(gram, free);
  block.diagonal().array() += shift;
  const auto llt = factor(std::move(block), ridge);
  const Vector b = restrict(rhs, free);
  Subproblem out;
  if (!sum_to_one) {
    out.x = llt.solve(b);
    return out;
  }
  const Vector ones = Vector::Ones(b.size());
  const Vector gb = llt.solve(b);
  const Vector g1 = llt.solve(ones);
  out.lambda = (gb.sum() - 1.0) / g1.sum();
  out.x = gb - out.lambda * g1;
  return out;
}

// Shared active-set loop. With `sum_to_one` the first index is freed
// unconditionally, since x = 0 does not satisfy the equality.
LsSolution active_set(const Matrix& gram, const Vector& rhs, double tol, bool sum_to_one,
                      double shift = 0.0) {
  const auto n = rhs.size();
  if (gram.rows() != n || gram.cols() != n) fail(ErrorKind::invalid_argument, "Gram shape mismatch");
  if (!gram.allFinite() || !rhs.allFinite()) fail(ErrorKind::numerical, "non-finite problem data");
  const double ridge = gram_ridge(gram);
  const int cap = 10 * static_cast<int>(n) + 10;

  Vector x = Vector::Zero(n);
  std::vector<bool> is_free(static_cast<std::size_t>(n), false);
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  double lambda = 0.0;
  Vector v = rhs - gram * x - shift * x;
  int iterations = 0;

  auto free_list = [&] {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < n; ++i)
      if (is_free[static_cast<std::size_t>(i)]) out.push_back(static_cast<int>(i));
    return out;
  };

  for (;;) {
    std::optional<int> enter;
    double best = -std::numeric_limits<double>::infinity();
    bool any_free = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (is_free[static_cast<std::size_t>(i)]) {
        any_free = true;
        continue;
      }
      if (blocked[static_cast<std::size_t>(i)]) continue;
      if (v[i] > best) {
        best = v[i];
        enter = static_cast<int>(i);
      }
    }
    const bool forced = sum_to_one && !any_free;
    if (!enter || (!forced && best <= tol)) break;
    if (++iterations > cap) fail(ErrorKind::numerical, "stalled");

    is_free[static_cast<std::size_t>(*enter)] = true;
    auto free = free_list();
    Subproblem sub = solve_free_set(gram, rhs, free, sum_to_one, ridge, shift);

    // Backtrack while the trial point leaves the orthant.
    while (sub.x.minCoeff() <= 0.0) {
      if (++iterations > cap) fail(ErrorKind::numerical, "stalled");
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < free.size(); ++a) {
        const double xi = x[free[a]];
        const double si = sub.x[static_cast<Eigen::Index>(a)];
        if (si <= 0.0 && xi > 0.0) alpha = std::min(alpha, xi / (xi - si));
      }
      if (!std::isfinite(alpha)) {
        // Only entries still at zero went nonpositive: release them.
        for (std::size_t a = 0; a < free.size(); ++a)
          if (sub.x[static_cast<Eigen::Index>(a)] <= 0.0) {
            is_free[static_cast<std::size_t>(free[a])] = false;
            blocked[static_cast<std::size_t>(free[a])] = true;
          }
      } else {
        for (std::size_t a = 0; a < free.size(); ++a) {
          const auto i = free[a];
          x[i] += alpha * (sub.x[static_cast<Eigen::Index>(a)] - x[i]);
          if (x[i] <= 1e-15 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
            x[i] = 0.0;
            is_free[static_cast<std::size_t>(i)] = false;
          }
        }
        std::fill(blocked.begin(), blocked.end(), false);
      }
      free = free_list();
      if (free.empty()) break;
      sub = solve_free_set(gram, rhs, free, sum_to_one, ridge, shift);
    }
    if (free.empty()) {
      if (sum_to_one) fail(ErrorKind::numerical, "infeasible");
      x.setZero();
      lambda = 0.0;
    } else {
      x.setZero();
      for (std::size_t a = 0; a < free.size(); ++a) x[free[a]] = sub.x[static_cast<Eigen::Index>(a)];
      lambda = sub.lambda;
      std::fill(blocked.begin(), blocked.end(), false);
    }
    v = rhs - gram * x - shift * x - lambda * Vector::Ones(n);
  }

  if (sum_to_one && std::abs(x.sum() - 1.0) > 1e-8) fail(ErrorKind::numerical, "infeasible");
  LsSolution out;
  out.x = x;
  out.lambda = lambda;
  out.dual = v;
  out.iterations = iterations;
  for (Eigen::Index i = 0; i < n; ++i)
    if (x[i] > 0.0) out.active.push_back(static_cast<int>(i));
  return out;
}

void check_problem(const LsProblem& prob) {
  if (prob.H.rows() < 1 || prob.H.cols() < 1) fail(ErrorKind::invalid_argument, "empty design matrix");
  if (prob.H.rows() != prob.y.size()) fail(ErrorKind::invalid_argument, "H and y disagree in rows");
  if (!prob.H.allFinite() || !prob.y.allFinite()) fail(ErrorKind::numerical, "non-finite problem data");
}

}  // namespace

double gram_ridge(const Matrix& gram) {
  const double scale = gram.trace() / static_cast<double>(std::max<Eigen::Index>(gram.rows(), 1));
  return 1e-10 * (scale > 0.0 ? scale : 1.0);
}

double quadratic_objective(const Matrix& gram, const Vector& rhs, const Vector& x) {
  return 0.5 * x.dot(gram * x) - rhs.dot(x);
}

LsSolution solve_simplex_nnls_gram(const Matrix& gram, const Vector& rhs, double tol) {
  return active_set(gram, rhs, tol, true);
}

LsSolution solve_simplex_nnls(const LsProblem& prob) {
  check_problem(prob);
  const Matrix gram = prob.H.transpose() * prob.H;
  const Vector rhs = prob.H.transpose() * prob.y;
  return solve_simplex_nnls_gram(gram, rhs, prob.tol);
}

LsSolution solve_nnls_gram(const Matrix& gram, const Vector& rhs, double tol) {
  return active_set(gram, rhs, tol, false);
}

LsSolution solve_ball_nnls_gram(const Matrix& gram, const Vector& rhs, double tol) {
  LsSolution free_fit = active_set(gram, rhs, tol, false);
  if (free_fit.x.norm() <= 1.0) return free_fit;

  // ||x(lambda)|| is nonincreasing; ||x(lambda)|| <= ||b+|| / lambda brackets the root.
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * rhs.cwiseMax(0.0).norm());
  LsSolution fit = active_set(gram, rhs, tol, false, hi);
  if (fit.x.norm() > 1.0) fail(ErrorKind::numerical, "stalled");
  int total = free_fit.iterations + fit.iterations;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    LsSolution trial = active_set(gram, rhs, tol, false, mid);
    total += trial.iterations;
    const double norm = trial.x.norm();
    if (norm > 1.0) {
      lo = mid;
    } else {
      hi = mid;
      fit = std::move(trial);
    }
    if (std::abs(fit.x.norm() - 1.0) <= 1e-10 || hi - lo <= 1e-15 * hi) break;
  }
  // A collapsed bracket on an ill-conditioned Gram leaves roundoff jumps in
  // ||x(lambda)||; the feasible side is accepted when it is close.
  const double gap = std::abs(fit.x.norm() - 1.0);
  if (gap > 1e-8 && !(hi - lo <= 1e-15 * hi && gap <= 1e-6)) fail(ErrorKind::numerical, "stalled");
  fit.lambda = hi;
  fit.dual = rhs - gram * fit.x - hi * fit.x;
  fit.iterations = total;
  return fit;
}

LsSolution solve_ball_nnls(const LsProblem& prob) {
  check_problem(prob);
  const Matrix gram = prob.H.transpose() * prob.H;
  const Vector rhs = prob.H.transpose() * prob.y;
  return solve_ball_nnls_gram(gram, rhs, prob.tol);
}

Vector solve_ls(const Matrix& H, const Vector& y) {
  if (H.rows() != y.size()) fail(ErrorKind::invalid_argument, "H and y disagree in rows");
  if (H.cols() == 0) return Vector();
  // The threshold must be set before compute: the Z factor is only built for
  // the rank seen at factorization time.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(H.rows(), H.cols());
  cod.setThreshold(1e-12);
  cod.compute(H);
  return cod.solve(y);
}

Vector solve_sum_to_one_ls_gram(const Matrix& gram, const Vector& rhs) {
  const auto llt = factor(gram, gram_ridge(gram));
  const Vector ones = Vector::Ones(rhs.size());
  const Vector gb = llt.solve(rhs);
  const Vector g1 = llt.solve(ones);
  const double lambda = (gb.sum() - 1.0) / g1.sum();
  return gb - lambda * g1;
}

Vector solve_sum_to_one_ls(const Matrix& H, const Vector& y) {
  if (H.rows() != y.size()) fail(ErrorKind::invalid_argument, "H and y disagree in rows");
  return solve_sum_to_one_ls_gram(H.transpose() * H, H.transpose() * y);
}

}  // namespace edgecache
