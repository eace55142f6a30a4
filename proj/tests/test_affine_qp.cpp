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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "edgecache/affine_qp.hpp"
#include "test_support.hpp"

using namespace edgecache;

namespace {

double objective(const AffineQp& qp, const Vector& c) { return 0.5 * c.dot(qp.G * c) - qp.g.dot(c); }

// Minimum over all working sets of the equality-constrained minimizer,
// keeping only feasible candidates.
double enumerate(const AffineQp& qp) {
  const auto n = qp.G.rows();
  const auto m = qp.A.rows();
  const bool eq = qp.equality.size() > 0;
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < m; ++i)
      if (mask & (1u << i)) rows.push_back(i);
    const auto k = static_cast<Eigen::Index>(rows.size()) + (eq ? 1 : 0);
    Matrix K = Matrix::Zero(n + k, n + k);
    Vector rhs = Vector::Zero(n + k);
    K.topLeftCorner(n, n) = qp.G;
    rhs.head(n) = qp.g;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      K.block(n + a, 0, 1, n) = qp.A.row(rows[a]);
      K.block(0, n + a, n, 1) = qp.A.row(rows[a]).transpose();
    }
    if (eq) {
      K.block(n + k - 1, 0, 1, n) = qp.equality.transpose();
      K.block(0, n + k - 1, n, 1) = qp.equality;
      rhs[n + k - 1] = 1.0;
    }
    const Vector sol = K.completeOrthogonalDecomposition().solve(rhs);
    if ((K * sol - rhs).norm() > 1e-8) continue;
    const Vector c = sol.head(n);
    if ((qp.A * c).minCoeff() < -1e-10) continue;
    best = std::min(best, objective(qp, c));
  }
  return best;
}

struct Instance {
  AffineQp qp;
  Vector start;
};

// Basis columns on the simplex; the prediction A c must stay nonnegative.
Instance random_instance(Rng& rng, Eigen::Index files, Eigen::Index order, bool equality) {
  std::normal_distribution<double> normal;
  Matrix basis(files, order);
  for (Eigen::Index j = 0; j < order; ++j) basis.col(j) = testing::random_profile_values(rng, files);
  Matrix H(3 * files, order);
  for (Eigen::Index i = 0; i < H.size(); ++i) H.data()[i] = normal(rng);
  Vector y(3 * files);
  for (auto& v : y) v = normal(rng);
  Instance out;
  out.qp = {H.transpose() * H, H.transpose() * y, basis, equality ? Vector(Vector::Ones(order)) : Vector()};
  out.start = Vector::Unit(order, 0) * (equality ? 1.0 : 0.0);
  return out;
}

}  // namespace

TEST_CASE("affine QP matches working-set enumeration") {
  Rng rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    const bool eq = trial % 2 == 0;
    const auto inst = random_instance(rng, 5, 3 + trial % 2, eq);
    const Vector c = solve_affine_qp(inst.qp, inst.start);
    CHECK((inst.qp.A * c).minCoeff() >= -1e-9);
    if (eq) CHECK(std::abs(c.sum() - 1.0) <= 1e-9);
    const double oracle = enumerate(inst.qp);
    CHECK(objective(inst.qp, c) <= oracle + 1e-8 * (1.0 + std::abs(oracle)));
  }
}

TEST_CASE("affine QP without constraints returns the Newton point") {
  const Matrix G = Matrix::Identity(2, 2) * 2.0;
  const Vector g{{2.0, -4.0}};
  const Vector c = solve_affine_qp({G, g, Matrix(0, 2), Vector()}, Vector::Zero(2));
  CHECK((c - Vector{{1.0, -2.0}}).norm() < 1e-9);
}

TEST_CASE("affine QP rejects an infeasible start") {
  const Matrix A = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(solve_affine_qp({Matrix::Identity(2, 2), Vector::Zero(2), A, Vector()}, Vector{{-1.0, 0.0}}), Error);
  CHECK_THROWS_AS(solve_affine_qp({Matrix::Identity(2, 2), Vector::Zero(3), A, Vector()}, Vector::Zero(2)), Error);
}

TEST_CASE("affine ball QP respects the norm of the image") {
  Rng rng(505);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_instance(rng, 6, 3, false);
    AffineQp qp = inst.qp;
    qp.g *= 10.0;
    const Vector c = solve_affine_ball_qp(qp.G, qp.g, qp.A);
    const Vector x = qp.A * c;
    CHECK(x.minCoeff() >= -1e-9);
    CHECK(x.norm() <= 1.0 + 1e-8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Random feasible coefficients: nonnegative c keeps A c >= 0.
    for (int k = 0; k < 100; ++k) {
      Vector r(3);
      for (auto& v : r) v = unit(rng);
      r *= unit(rng) / (qp.A * r).norm();
      CHECK(objective(qp, c) <= objective(qp, r) + 1e-9);
    }
  }
}
