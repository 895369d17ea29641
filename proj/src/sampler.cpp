// Copyright 2026 The cvxadp Authors
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

#include "cvxadp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cvxadp/parallel.hpp"

namespace cvxadp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFlatRadius = 1e-9;
constexpr double kSampleTol = 1e-9;
constexpr int kChordRetries = 100;
}  // namespace

void HitAndRunConfig::validate() const {
  if (chains < 1) throw std::invalid_argument("hit-and-run: chains must be >= 1");
  if (border_points_per_start < 1) {
    throw std::invalid_argument("hit-and-run: need at least one border point per start");
  }
  if (burn_in && *burn_in < 0) throw std::invalid_argument("hit-and-run: burn-in must be >= 0");
}

Polytope reachable_polytope(const Matrix& q, std::span<const Matrix> couplings,
                            std::span<const Vector> rhs, std::span<const Vector> xs) {
  if (couplings.empty() || xs.empty()) {
    throw std::invalid_argument("reachable_polytope: need at least one decision and one disturbance");
  }
  if (couplings.size() != rhs.size()) {
    throw std::invalid_argument("reachable_polytope: one coupling matrix per right-hand side");
  }
  const Index rows = q.rows();
  const Index prev_dim = xs.front().size();
  Matrix prev(prev_dim, static_cast<Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require_dim(xs[i].size(), prev_dim, "reachable_polytope decision");
    prev.col(static_cast<Index>(i)) = xs[i];
  }

  Vector bound = Vector::Constant(rows, -kInf);
  for (std::size_t j = 0; j < couplings.size(); ++j) {
    require_dim(couplings[j].rows(), rows, "coupling matrix rows");
    require_dim(couplings[j].cols(), prev_dim, "coupling matrix cols");
    require_dim(rhs[j].size(), rows, "constraint right-hand side");
    Matrix values = -(couplings[j] * prev);
    values.colwise() += rhs[j];
    bound = bound.cwiseMax(values.rowwise().maxCoeff());
  }
  return Polytope(q, std::move(bound));
}

Vector border_point_along(const Polytope& region, const Vector& origin, const Vector& direction) {
  const Vector rate = region.Q() * direction;
  const Vector slack = region.slack(origin).cwiseMax(0.0);
  double step = kInf;
  for (Index l = 0; l < rate.size(); ++l) {
    if (rate[l] > 1e-14) step = std::min(step, slack[l] / rate[l]);
  }
  if (step == kInf) throw NumericError("border point: region is unbounded along the ray");
  return origin + step * direction;
}

Vector random_border_point(const Polytope& region, const Vector& interior, Rng& rng) {
  return border_point_along(region, interior, random_direction(rng, region.dim()));
}

Vector random_border_point(const Polytope& region, Rng& rng) {
  const ChebyshevBall ball = chebyshev_center(region);
  if (ball.radius <= kFlatRadius) {
    throw NumericError("border point: region is not full-dimensional");
  }
  return random_border_point(region, ball.center, rng);
}

namespace {

// Feasible chord [lo, hi] through x along u.
bool chord(const Polytope& region, const Vector& x, const Vector& u, double& lo, double& hi) {
  const Vector rate = region.Q() * u;
  const Vector slack = region.slack(x).cwiseMax(0.0);
  lo = -kInf;
  hi = kInf;
  for (Index l = 0; l < rate.size(); ++l) {
    if (rate[l] > 1e-14) {
      hi = std::min(hi, slack[l] / rate[l]);
    } else if (rate[l] < -1e-14) {
      lo = std::max(lo, slack[l] / rate[l]);
    }
  }
  if (lo == -kInf || hi == kInf) throw NumericError("hit-and-run: region is unbounded");
  return hi - lo > 1e-14;
}

void step(const Polytope& region, Vector& x, Rng& rng) {
  for (int attempt = 0; attempt < kChordRetries; ++attempt) {
    const Vector u = random_direction(rng, region.dim());
    double lo = 0.0, hi = 0.0;
    if (!chord(region, x, u, lo, hi)) continue;
    double t = lo + uniform01(rng) * (hi - lo);
    Vector next = x + t * u;
    // Rounding at the chord ends can push the point a hair outside.
    while (!region.contains(next, kSampleTol) && std::abs(t) > 0.0) {
      t *= 0.5;
      next = x + t * u;
    }
    x = std::move(next);
    return;
  }
  // Corner trap: stay put for this iterate.
}

}  // namespace

Matrix hit_and_run(const Polytope& region, Index count, const HitAndRunConfig& config) {
  config.validate();
  if (count < 0) throw std::invalid_argument("hit-and-run: negative sample count");
  const Index d = region.dim();
  Matrix out(count, d);
  if (count == 0) return out;

  const ChebyshevBall ball = chebyshev_center(region);
  if (ball.radius <= kFlatRadius) {
    throw NumericError("hit-and-run: region is not full-dimensional (Chebyshev radius " +
                       std::to_string(ball.radius) + ")");
  }

  const Index chains = std::min<Index>(config.chains, count);
  const Index per_chain = (count + chains - 1) / chains;
  const int burn_in = config.burn_in.value_or(static_cast<int>(d * d));

  std::vector<Matrix> emitted(static_cast<std::size_t>(chains));
  parallel_for(static_cast<std::size_t>(chains), [&](std::size_t c) {
    Rng rng = make_stream(config.seed, "hit-and-run", c);
    Vector x = Vector::Zero(d);
    for (int b = 0; b < config.border_points_per_start; ++b) {
      x += random_border_point(region, ball.center, rng);
    }
    x /= static_cast<double>(config.border_points_per_start);
    if (region.slack(x).minCoeff() <= 0.0) {
      // All border points landed on one facet; pull toward the center.
      x = 0.5 * (x + ball.center);
    }
    if (!(region.slack(x).minCoeff() > 0.0)) {
      throw NumericError("hit-and-run: chain start is not strictly interior");
    }

    for (int b = 0; b < burn_in; ++b) step(region, x, rng);
    Matrix& mine = emitted[c];
    mine.resize(per_chain, d);
    for (Index s = 0; s < per_chain; ++s) {
      step(region, x, rng);
      mine.row(s) = x.transpose();
    }
  });

  for (Index k = 0; k < count; ++k) {
    out.row(k) = emitted[static_cast<std::size_t>(k % chains)].row(k / chains);
  }
  return out;
}

namespace {

// Rows of Q x <= c that hold with equality on the whole region.
std::vector<Index> implicit_equalities(const Polytope& region, const Vector& center) {
  const double scale = std::max(1.0, region.c().cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;
  const Vector slack = region.slack(center);
  std::vector<Index> rows;
  for (Index l = 0; l < region.rows(); ++l) {
    if (slack[l] > tol) continue;
    if (region.Q().row(l).norm() == 0.0) continue;
    LinearProgram lp{region.Q().row(l).transpose(), region.Q(), region.c()};
    const LpResult res = solve_lp(lp);
    if (res.status != LpStatus::optimal) {
      throw NumericError("sampler: cannot bound constraint slack (" + to_string(res.status) + ")");
    }
    if (region.c()[l] - *res.value <= tol) rows.push_back(l);
  }
  return rows;
}

}  // namespace

PolytopeSample sample_polytope(const Polytope& region, Index count, const HitAndRunConfig& config) {
  const ChebyshevBall ball = chebyshev_center(region);
  PolytopeSample out;
  if (ball.radius > kFlatRadius) {
    out.points = hit_and_run(region, count, config);
    out.affine_dim = region.dim();
    return out;
  }

  out.reduced = true;
  const std::vector<Index> eq = implicit_equalities(region, ball.center);
  const Index d = region.dim();
  Matrix q_eq(static_cast<Index>(eq.size()), d);
  Vector c_eq(static_cast<Index>(eq.size()));
  for (std::size_t k = 0; k < eq.size(); ++k) {
    q_eq.row(static_cast<Index>(k)) = region.Q().row(eq[k]);
    c_eq[static_cast<Index>(k)] = region.c()[eq[k]];
  }

  // Orthonormal basis of the null space of the equality rows, and the
  // center projected onto the affine hull.
  Matrix basis;
  Vector origin = ball.center;
  if (eq.empty()) {
    basis = Matrix::Identity(d, d);
  } else {
    Eigen::JacobiSVD<Matrix> svd(q_eq, Eigen::ComputeFullV | Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    Index rank = 0;
    const double cutoff = 1e-10 * (sv.size() ? sv[0] : 0.0);
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    basis = svd.matrixV().rightCols(d - rank);
    origin -= svd.solve(q_eq * origin - c_eq);
  }
  out.affine_dim = basis.cols();

  auto repeat_center = [&] {
    out.degenerate = true;
    out.points = origin.transpose().replicate(count, 1);
    return out;
  };
  if (basis.cols() == 0) return repeat_center();

  std::vector<Index> keep;
  for (Index l = 0; l < region.rows(); ++l) {
    if (std::find(eq.begin(), eq.end(), l) != eq.end()) continue;
    if ((region.Q().row(l) * basis).norm() <= 1e-12) continue;  // constant on the hull
    keep.push_back(l);
  }
  if (keep.empty()) return repeat_center();
  Matrix q_red(static_cast<Index>(keep.size()), basis.cols());
  Vector c_red(static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    q_red.row(static_cast<Index>(k)) = region.Q().row(keep[k]) * basis;
    c_red[static_cast<Index>(k)] = region.c()[keep[k]] - region.Q().row(keep[k]).dot(origin);
  }
  const Polytope reduced(std::move(q_red), std::move(c_red));
  if (chebyshev_center(reduced).radius <= kFlatRadius) return repeat_center();

  const Matrix u = hit_and_run(reduced, count, config);
  out.points = (u * basis.transpose()).rowwise() + origin.transpose();
  return out;
}

}  // namespace cvxadp
