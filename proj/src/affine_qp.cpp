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

#include "edgecache/affine_qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "edgecache/nnls.hpp"

namespace edgecache {
namespace {

Matrix working_rows(const AffineQp& qp, const std::vector<int>& working) {
  const Eigen::Index eq = qp.equality.size() > 0 ? 1 : 0;
  Matrix E(eq + static_cast<Eigen::Index>(working.size()), qp.G.cols());
  if (eq) E.row(0) = qp.equality.transpose();
  for (std::size_t k = 0; k < working.size(); ++k)
    E.row(eq + static_cast<Eigen::Index>(k)) = qp.A.row(working[k]);
  return E;
}

Matrix null_basis(const Matrix& E, Eigen::Index n) {
  if (E.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(E, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = 1e-12 * std::max(1.0, sv.size() ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace

Vector solve_affine_qp(const AffineQp& qp, Vector c) {
  const auto n = qp.G.rows();
  if (qp.G.cols() != n || qp.g.size() != n || c.size() != n || (qp.A.rows() > 0 && qp.A.cols() != n) ||
      (qp.equality.size() > 0 && qp.equality.size() != n))
    fail(ErrorKind::invalid_argument, "affine QP shape mismatch");
  if (n == 0) fail(ErrorKind::invalid_argument, "empty affine QP");
  if (!qp.G.allFinite() || !qp.g.allFinite() || !qp.A.allFinite())
    fail(ErrorKind::numerical, "non-finite problem data");

  const Matrix& G = qp.G;
  const Eigen::Index m = qp.A.rows();
  const double feas_tol = 1e-9 * std::max(1.0, m > 0 ? qp.A.cwiseAbs().maxCoeff() : 0.0);
  if (m > 0 && (qp.A * c).minCoeff() < -feas_tol) fail(ErrorKind::invalid_argument, "infeasible start");

  // Gradient entries carry roundoff of order eps * |G| |c|; multipliers
  // below that scale are noise.
  const double g_scale = G.cwiseAbs().maxCoeff();
  std::vector<int> working;
  int last_dropped = -1;
  // An unblocked full step lands on the working-set minimizer; recomputing
  // the step there only returns roundoff.
  bool stationary = false;
  const int cap = 50 * static_cast<int>(n + m) + 50;
  for (int it = 0; it < cap; ++it) {
    const Matrix E = working_rows(qp, working);
    const Vector grad = G * c - qp.g;
    Vector p = Vector::Zero(n);
    if (!stationary) {
      const Matrix Z = null_basis(E, n);
      if (Z.cols() > 0) {
        const Matrix reduced = Z.transpose() * G * Z;
        p = -Z * reduced.completeOrthogonalDecomposition().solve(Z.transpose() * grad);
      }
    }

    if (stationary || p.norm() <= 1e-13 * (1.0 + c.norm())) {
      stationary = false;
      if (working.empty()) return c;
      // grad = E^T mu at a working-set minimizer; inequality rows need mu >= 0.
      const Vector mu = E.transpose().completeOrthogonalDecomposition().solve(grad);
      const Eigen::Index eq = qp.equality.size() > 0 ? 1 : 0;
      Eigen::Index worst = -1;
      double most_negative =
          -std::max(1e-12 * grad.cwiseAbs().maxCoeff(), 1e-13 * (g_scale * c.norm() + qp.g.norm()));
      for (Eigen::Index k = eq; k < mu.size(); ++k)
        if (mu[k] < most_negative) {
          most_negative = mu[k];
          worst = k - eq;
        }
      if (worst < 0) return c;
      last_dropped = working[static_cast<std::size_t>(worst)];
      working.erase(working.begin() + worst);
      continue;
    }

    double alpha = 1.0;
    int blocking = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(working.begin(), working.end(), static_cast<int>(i)) != working.end()) continue;
      const double ap = qp.A.row(i).dot(p);
      if (ap >= -1e-12 * qp.A.row(i).norm() * p.norm()) continue;
      const double ratio = std::max(0.0, qp.A.row(i).dot(c)) / -ap;
      if (ratio < alpha) {
        alpha = ratio;
        blocking = static_cast<int>(i);
      }
    }
    // Re-blocked at once by the row just released: that release was noise.
    if (blocking >= 0 && blocking == last_dropped && alpha == 0.0) return c;
    last_dropped = -1;
    c += alpha * p;
    if (blocking >= 0) working.push_back(blocking);
    stationary = blocking < 0;
  }
  fail(ErrorKind::numerical, "stalled");
}

Vector solve_affine_ball_qp(const Matrix& G, const Vector& g, const Matrix& A) {
  const auto n = G.rows();
  const Matrix AtA = A.transpose() * A;
  auto solve_at = [&](double lambda) {
    AffineQp qp{G + lambda * AtA, g, A, Vector()};
    return solve_affine_qp(qp, Vector::Zero(n));
  };
  Vector c = solve_at(0.0);
  if ((A * c).norm() <= 1.0) return c;

  double lo = 0.0, hi = 1.0;
  Vector c_hi = solve_at(hi);
  for (int it = 0; it < 200 && (A * c_hi).norm() > 1.0; ++it) {
    lo = hi;
    hi *= 4.0;
    c_hi = solve_at(hi);
  }
  if ((A * c_hi).norm() > 1.0) fail(ErrorKind::numerical, "stalled");
  for (int it = 0; it < 200; ++it) {
    const double norm = (A * c_hi).norm();
    if (std::abs(norm - 1.0) <= 1e-10 || hi - lo <= 1e-15 * hi) break;
    const double mid = 0.5 * (lo + hi);
    Vector trial = solve_at(mid);
    if ((A * trial).norm() > 1.0) {
      lo = mid;
    } else {
      hi = mid;
      c_hi = std::move(trial);
    }
  }
  const double gap = std::abs((A * c_hi).norm() - 1.0);
  if (gap > 1e-8 && !(hi - lo <= 1e-15 * hi && gap <= 1e-6)) fail(ErrorKind::numerical, "stalled");
  return c_hi;
}

}  // namespace edgecache
