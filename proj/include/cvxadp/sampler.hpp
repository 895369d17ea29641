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

#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "cvxadp/lp.hpp"
#include "cvxadp/rng.hpp"

namespace cvxadp {

struct HitAndRunConfig {
  int chains = 100;
  int border_points_per_start = 10;
  std::optional<int> burn_in;  // unset: d^2 for the polytope at hand
  std::uint64_t seed = 0;

  void validate() const;
};

/// Smallest polytope {x : Q x <= rhs} containing every set
/// {x : Q x + W_j x_i <= c_j}: rhs is the componentwise max over (i, j) of
/// c_j - W_j x_i. `couplings[j]` and `rhs[j]` are W and c evaluated at the
/// j-th disturbance.
Polytope reachable_polytope(const Matrix& q, std::span<const Matrix> couplings,
                            std::span<const Vector> rhs, std::span<const Vector> xs);

/// Boundary point hit by the ray origin + t * direction, t > 0 maximal.
/// Throws NumericError when the ray never leaves the region.
Vector border_point_along(const Polytope& region, const Vector& origin, const Vector& direction);

/// Ray from the Chebyshev center in a uniformly random direction.
Vector random_border_point(const Polytope& region, Rng& rng);
Vector random_border_point(const Polytope& region, const Vector& interior, Rng& rng);

/// `count` Hit-and-run points (one per row), interleaved round-robin from
/// independent chains. Each chain starts at the mean of random border
/// points and discards `burn_in` iterates. Requires a bounded,
/// full-dimensional region (throws NumericError otherwise).
Matrix hit_and_run(const Polytope& region, Index count, const HitAndRunConfig& config);

struct PolytopeSample {
  Matrix points;          // count x d
  Index affine_dim = 0;   // dimension of the sampled set
  bool reduced = false;   // sampled inside the affine hull of a flat region
  bool degenerate = false;  // single point or no usable interior: centers repeated
};

/// Hit-and-run that also accepts lower-dimensional regions: implicit
/// equalities are detected, the free coordinates of the affine hull are
/// sampled, and the bound coordinates are recovered from them.
PolytopeSample sample_polytope(const Polytope& region, Index count, const HitAndRunConfig& config);

}  // namespace cvxadp
