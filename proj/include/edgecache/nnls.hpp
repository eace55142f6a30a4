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

#include <vector>

#include "edgecache/core.hpp"

namespace edgecache {

enum class Constraint {
  none,     // unconstrained
  simplex,  // x >= 0, 1^T x = 1
  ball,     // x >= 0, ||x||_2 <= 1
};

struct LsProblem {
  Matrix H;
  Vector y;
  Constraint kind = Constraint::simplex;
  double tol = 1e-10;  // dual feasibility tolerance
};

struct LsSolution {
  Vector x;
  std::vector<int> active;  // indices with x_i > 0
  double lambda = 0.0;      // multiplier of the sum or norm constraint
  Vector dual;              // v = H^T (y - H x) - lambda * (1 or x)
  int iterations = 0;
};

/// Active-set solver for min 0.5 ||y - H x||^2 subject to x >= 0, 1^T x = 1.
/// Forms H^T H and H^T y once; each outer step frees the index with the
/// largest dual and solves the sum-constrained subproblem on the free set,
/// backtracking toward the previous iterate when an entry turns nonpositive.
LsSolution solve_simplex_nnls(const LsProblem& prob);
LsSolution solve_simplex_nnls_gram(const Matrix& gram, const Vector& rhs, double tol = 1e-10);

/// min 0.5 ||y - H x||^2 subject to x >= 0, ||x|| <= 1. Bisects the norm
/// multiplier around a nonnegative active-set solve of (H^T H + lambda I).
LsSolution solve_ball_nnls(const LsProblem& prob);
LsSolution solve_ball_nnls_gram(const Matrix& gram, const Vector& rhs, double tol = 1e-10);

/// Plain nonnegative least squares in Gram form (lambda fixed at zero).
LsSolution solve_nnls_gram(const Matrix& gram, const Vector& rhs, double tol = 1e-10);

/// Minimum-norm least-squares solution of H c ~ y.
Vector solve_ls(const Matrix& H, const Vector& y);

/// min ||y - H c||^2 subject to 1^T c = 1, via the multiplier closed form
/// c = G^-1 (b - lambda 1), lambda = (1^T G^-1 b - 1) / (1^T G^-1 1).
Vector solve_sum_to_one_ls(const Matrix& H, const Vector& y);
Vector solve_sum_to_one_ls_gram(const Matrix& gram, const Vector& rhs);

/// 0.5 x^T G x - b^T x, up to the constant 0.5 ||y||^2.
double quadratic_objective(const Matrix& gram, const Vector& rhs, const Vector& x);

/// Ridge added to a near-singular Gram block: 1e-10 * trace / n.
double gram_ridge(const Matrix& gram);

}  // namespace edgecache
