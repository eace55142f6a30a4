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

#include "edgecache/core.hpp"

namespace edgecache {

/// min 0.5 c^T G c - g^T c  subject to  A c >= 0  and optionally e^T c = 1.
///
/// Used for regressions whose constraint lives on a linear image of the
/// coefficients: the prediction is P c and must stay in the orthant.
struct AffineQp {
  Matrix G;
  Vector g;
  Matrix A;  // one inequality per row; may have zero rows
  Vector equality;  // e; empty when there is no equality
};

/// Primal active-set method with a null-space step. `start` must be
/// feasible. A singular G is ridged by gram_ridge(G).
Vector solve_affine_qp(const AffineQp& qp, Vector start);

/// Same feasible set without the equality, plus ||A c|| <= 1. Bisects the
/// multiplier of the norm constraint, starting from c = 0.
Vector solve_affine_ball_qp(const Matrix& G, const Vector& g, const Matrix& A);

}  // namespace edgecache
