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

#include "edgecache/op_predictors.hpp"

#include <algorithm>
#include <cmath>

#include "edgecache/affine_qp.hpp"
#include "edgecache/nnls.hpp"

namespace edgecache {
namespace {

struct RowSpace {
  Eigen::Index rank = 0;
  Matrix pinv;   // d x N
  Matrix null;   // d x (d - rank)
  Matrix range;  // N x rank, orthonormal
};

RowSpace analyze(const Matrix& basis) {
  Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // Directions this weak would square into a hopelessly conditioned Gram.
  const double cut = 1e-7 * (sv.size() ? sv[0] : 0.0);
  RowSpace out;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++out.rank;
  const auto r = out.rank;
  out.pinv = svd.matrixV().leftCols(r) * sv.head(r).cwiseInverse().asDiagonal() *
             svd.matrixU().leftCols(r).transpose();
  out.null = svd.matrixV().rightCols(basis.cols() - r);
  out.range = svd.matrixU().leftCols(r);
  return out;
}

// Objective restated in prediction space x = basis * c. Valid when the basis
// has full row rank, so every x is reachable; the null-space directions of
// the basis are profiled out of the residual by projection.
StackedDesign to_prediction_space(const Matrix& H, const Vector& y, const RowSpace& rs) {
  StackedDesign out{H * rs.pinv, y};
  if (rs.null.cols() > 0) {
    const Matrix M = H * rs.null;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
    out.H -= M * cod.solve(out.H);
    out.y -= M * cod.solve(out.y);
  }
  return out;
}

void check_window(const HistoryWindow& w, const OpConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(w.profiles.size()) != cfg.window)
    fail(ErrorKind::invalid_argument, "history window length differs from tau");
  const auto n = w.profiles.front().size();
  for (const auto& p : w.profiles)
    if (p.size() != n) fail(ErrorKind::invalid_argument, "profiles in window differ in size");
}

std::vector<Vector> as_vectors(const std::vector<PopularityProfile>& ps) {
  std::vector<Vector> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back(p.values());
  return out;
}

}  // namespace

PopularityProfile clamp_to_profile(const Vector& x) {
  const Vector clamped = x.cwiseMax(0.0).cwiseMin(1.0);
  if (!(clamped.sum() > 0.0) || !clamped.allFinite()) return PopularityProfile::uniform(x.size());
  return PopularityProfile::normalized(clamped);
}

PopularityProfile profile_from_counts(const Vector& counts) {
  const Vector n = counts.cwiseMax(0.0);
  if (!n.allFinite()) fail(ErrorKind::numerical, "non-finite counts");
  if (!(n.sum() > 0.0)) return PopularityProfile::uniform(n.size());
  return PopularityProfile::normalized(n);
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ppm: return "ppm";
    case ModelKind::gpm: return "gpm";
    case ModelKind::rpm: return "rpm";
    case ModelKind::ipm: return "ipm";
    case ModelKind::asppm: return "asppm";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& name) {
  for (auto k : {ModelKind::ppm, ModelKind::gpm, ModelKind::rpm, ModelKind::ipm, ModelKind::asppm})
    if (to_string(k) == name) return k;
  fail(ErrorKind::config, "unknown model kind '" + name + "'");
}

void OpConfig::validate() const {
  if (order < 1) fail(ErrorKind::config, "order: must be >= 1");
  if (window < order + 1) fail(ErrorKind::config, "window: must be >= order + 1");
  if (!(prob_floor > 0.0 && prob_floor < 1.0)) fail(ErrorKind::config, "prob_floor: must lie in (0, 1)");
  if (n_max_policy == NmaxPolicy::fixed && !(n_max >= 2.0)) fail(ErrorKind::config, "n_max: must be >= 2");
}

StackedDesign stack_series(const std::vector<Vector>& series, int order) {
  const int tau = static_cast<int>(series.size());
  if (order < 1 || tau < order + 1) fail(ErrorKind::invalid_argument, "series too short for order");
  const auto m = series.front().size();
  const Eigen::Index rows = m * (tau - order);
  StackedDesign out{Matrix(rows, order), Vector(rows)};
  for (int j = 0; j < tau - order; ++j) {
    out.y.segment(j * m, m) = series[static_cast<std::size_t>(order + j)];
    for (int k = 1; k <= order; ++k)
      out.H.block(j * m, k - 1, m, 1) = series[static_cast<std::size_t>(order + j - k)];
  }
  return out;
}

Matrix recent_basis(const std::vector<Vector>& series, int order) {
  const int tau = static_cast<int>(series.size());
  if (tau < order) fail(ErrorKind::invalid_argument, "series too short for order");
  Matrix out(series.front().size(), order);
  for (int k = 1; k <= order; ++k) out.col(k - 1) = series[static_cast<std::size_t>(tau - k)];
  return out;
}

// Prediction-space fit x = U z over the numerical range of the basis. The
// coefficient space is avoided because nearly parallel history columns make
// its constraint rows nearly dependent.
struct RangeFit {
  Matrix G;
  Vector g;
};

RangeFit range_problem(const Matrix& H, const Vector& y, const RowSpace& rs) {
  const StackedDesign px = to_prediction_space(H, y, rs);
  const Matrix HU = px.H * rs.range;
  return {HU.transpose() * HU, HU.transpose() * px.y};
}

Vector fit_convex_ar(const Matrix& H, const Vector& y, const Matrix& basis) {
  const RowSpace rs = analyze(basis);
  if (rs.rank == 0) fail(ErrorKind::numerical, "degenerate history");
  if (rs.rank == basis.rows()) {
    const StackedDesign px = to_prediction_space(H, y, rs);
    return solve_simplex_nnls(LsProblem{px.H, px.y, Constraint::simplex}).x;
  }
  const RangeFit f = range_problem(H, y, rs);
  // Columns of the basis sum to one, so 1^T x = 1 is the coefficient equality.
  const Vector equality = rs.range.transpose() * Vector::Ones(basis.rows());
  const Vector start = rs.range.transpose() * basis.col(0);
  return rs.range * solve_affine_qp(AffineQp{f.G, f.g, rs.range, equality}, start);
}

Vector fit_ball_ar(const Matrix& H, const Vector& y, const Matrix& basis) {
  const RowSpace rs = analyze(basis);
  if (rs.rank == 0) fail(ErrorKind::numerical, "degenerate history");
  if (rs.rank == basis.rows()) {
    const StackedDesign px = to_prediction_space(H, y, rs);
    return solve_ball_nnls(LsProblem{px.H, px.y, Constraint::ball}).x;
  }
  const RangeFit f = range_problem(H, y, rs);
  return rs.range * solve_affine_ball_qp(f.G, f.g, rs.range);
}

PopularityProfile ppm_predict(const HistoryWindow& w, const OpConfig& cfg) {
  check_window(w, cfg);
  const auto series = as_vectors(w.profiles);
  const auto design = stack_series(series, cfg.order);
  return clamp_to_profile(fit_convex_ar(design.H, design.y, recent_basis(series, cfg.order)));
}

PopularityProfile gpm_predict(const HistoryWindow& w, const OpConfig& cfg) {
  check_window(w, cfg);
  std::vector<Vector> series;
  for (const auto& p : w.profiles) series.push_back(p.sqrt().values());
  const auto design = stack_series(series, cfg.order);
  const Vector root = fit_ball_ar(design.H, design.y, recent_basis(series, cfg.order));
  return clamp_to_profile(root.cwiseAbs2());
}

double window_n_max(const CountMatrix& counts, const OpConfig& cfg) {
  if (cfg.n_max_policy == NmaxPolicy::fixed) return cfg.n_max;
  return std::max<double>(2.0, static_cast<double>(counts.maxCoeff()));
}

RpmPrediction rpm_predict(const HistoryWindow& w, const OpConfig& cfg) {
  check_window(w, cfg);
  if (!w.counts) fail(ErrorKind::invalid_argument, "RPM needs request counts");
  const CountMatrix& counts = *w.counts;
  const auto n = w.profiles.front().size();
  if (counts.rows() != n || counts.cols() != cfg.window)
    fail(ErrorKind::invalid_argument, "count window shape mismatch");
  const double n_max = window_n_max(counts, cfg);
  const double log_max = std::log(n_max);

  Vector predicted(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    std::vector<Vector> series;
    for (int i = 0; i < cfg.window; ++i) {
      const double c = std::max<double>(1.0, static_cast<double>(counts(l, i)));
      series.push_back(Vector::Constant(1, std::log(c) - log_max));
    }
    const auto design = stack_series(series, cfg.order);
    const Vector coef = solve_ls(design.H, design.y);
    const double next = recent_basis(series, cfg.order).row(0).dot(coef);
    // The relative nudge keeps exact integers from flooring one count low.
    // Extrapolated logs can overshoot wildly on sparse files; cap so the
    // count stays finite.
    const double value = n_max * std::exp(std::min(next, 700.0 - log_max));
    predicted[l] = std::floor(value * (1.0 + 1e-12));
  }
  if (!predicted.allFinite()) fail(ErrorKind::numerical, "non-finite RPM prediction");
  return {predicted, profile_from_counts(predicted)};
}

Vector information_vector(const PopularityProfile& p, double eps) {
  const Vector floored = p.values().cwiseMax(eps);
  return -(floored / floored.sum()).array().log().matrix();
}

PopularityProfile from_information(const Vector& x) {
  if (!x.allFinite()) fail(ErrorKind::numerical, "non-finite information vector");
  return PopularityProfile::normalized((-(x.array() - x.minCoeff())).exp().matrix());
}

PopularityProfile ipm_predict(const HistoryWindow& w, const OpConfig& cfg) {
  check_window(w, cfg);
  std::vector<Vector> series;
  for (const auto& p : w.profiles) series.push_back(information_vector(p, cfg.prob_floor));
  const auto design = stack_series(series, cfg.order);
  const Vector coef = solve_ls(design.H, design.y);
  return from_information(recent_basis(series, cfg.order) * coef);
}

PopularityProfile asppm_predict(const HistoryWindow& w, const OpConfig& cfg, const AspConstants& k,
                                int cache_size) {
  check_window(w, cfg);
  std::vector<Vector> series;
  for (const auto& p : w.profiles)
    series.push_back(Vector::Constant(1, asp(p, optimal_placement(p, cache_size, k).q, k)));
  const auto design = stack_series(series, cfg.order);
  const auto profiles = as_vectors(w.profiles);
  return clamp_to_profile(fit_convex_ar(design.H, design.y, recent_basis(profiles, cfg.order)));
}

PopularityProfile op_predict(const HistoryWindow& w, const OpConfig& cfg, const AspConstants& k,
                             int cache_size) {
  switch (cfg.kind) {
    case ModelKind::ppm: return ppm_predict(w, cfg);
    case ModelKind::gpm: return gpm_predict(w, cfg);
    case ModelKind::rpm: return rpm_predict(w, cfg).profile;
    case ModelKind::ipm: return ipm_predict(w, cfg);
    case ModelKind::asppm: return asppm_predict(w, cfg, k, cache_size);
  }
  fail(ErrorKind::invalid_argument, "unknown model kind");
}

}  // namespace edgecache
