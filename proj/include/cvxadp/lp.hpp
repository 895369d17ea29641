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

#include <optional>
#include <string>

#include "cvxadp/common.hpp"
#include "cvxadp/maxaffine.hpp"

namespace cvxadp {

/// {x : Q x <= c}
class Polytope {
 public:
  Polytope() = default;
  Polytope(Matrix q, Vector c);

  const Matrix& Q() const { return q_; }
  const Vector& c() const { return c_; }
  Index dim() const { return q_.cols(); }
  Index rows() const { return q_.rows(); }

  /// c - Q x
  Vector slack(const Eigen::Ref<const Vector>& x) const;
  /// max(0, max_l (Q x - c)_l)
  double violation(const Eigen::Ref<const Vector>& x) const;
  bool contains(const Eigen::Ref<const Vector>& x, double tol = 1e-9) const {
    return violation(x) <= tol;
  }

 private:
  Matrix q_;
  Vector c_;
};

/// minimize objective . v  subject to  A v <= b, v free.
struct LinearProgram {
  Vector objective;
  Matrix A;
  Vector b;
};

enum class LpStatus { optimal, infeasible, unbounded, failed };

std::string to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::failed;
  std::optional<Vector> solution;
  std::optional<double> value;
  int iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-10;
  int degenerate_pivots_before_bland = 50;
  int max_iterations = 0;  // 0: 50 (m + n) + 1000
};

/// Two-phase revised simplex on the slack form A v + s = b, s >= 0, with
/// free structural variables and an explicitly updated basis inverse.
/// Dantzig pricing with a Harris ratio test; falls back to Bland's rule
/// after a run of degenerate pivots.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& options = {});

class LpInfeasible : public NumericError {
 public:
  using NumericError::NumericError;
};

class LpUnbounded : public NumericError {
 public:
  using NumericError::NumericError;
};

struct MaxAffineMinimum {
  Vector x;
  double value = 0.0;
};

/// min over the region of the max-affine function, by the epigraph LP
///   min t  s.t.  a_k . x + b_k <= t,  Q x <= c.
/// Throws LpInfeasible / LpUnbounded / NumericError.
MaxAffineMinimum minimize_max_affine(const MaxAffineModel& model, const Polytope& region);

struct ChebyshevBall {
  Vector center;
  double radius = 0.0;
};

/// Largest inscribed ball: max r s.t. Q_l x + r |Q_l| <= c_l, r >= 0.
/// Throws LpInfeasible for an empty region and LpUnbounded when the region
/// contains arbitrarily large balls.
ChebyshevBall chebyshev_center(const Polytope& region);

}  // namespace cvxadp
