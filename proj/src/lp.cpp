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

#include "cvxadp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cvxadp {

Polytope::Polytope(Matrix q, Vector c) : q_(std::move(q)), c_(std::move(c)) {
  if (q_.rows() < 1) throw std::invalid_argument("polytope needs at least one constraint");
  require_dim(c_.size(), q_.rows(), "polytope right-hand side");
  if (!q_.allFinite() || !c_.allFinite()) throw std::invalid_argument("polytope: non-finite entry");
}

Vector Polytope::slack(const Eigen::Ref<const Vector>& x) const {
  require_dim(x.size(), dim(), "polytope point");
  return c_ - q_ * x;
}

double Polytope::violation(const Eigen::Ref<const Vector>& x) const {
  return std::max(0.0, -slack(x).minCoeff());
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::failed: return "failed";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Variables are laid out as [structural (n) | slacks (m) | artificials].
// Every nonbasic variable sits at zero: structurals are free, slacks and
// artificials have lower bound zero, and artificials are fixed at zero in
// phase two. Hence the basic values are always B^-1 b.
class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const LpOptions& opt)
      : a_(lp.A), b_(lp.b), c_(lp.objective), opt_(opt), m_(lp.A.rows()), n_(lp.A.cols()) {
    max_iterations_ = opt.max_iterations > 0 ? opt.max_iterations
                                             : static_cast<int>(50 * (m_ + n_) + 1000);
    refactor_every_ = static_cast<int>(std::max<Index>(64, m_));

    basis_.resize(static_cast<std::size_t>(m_));
    for (Index i = 0; i < m_; ++i) {
      if (b_[i] >= 0.0) {
        basis_[static_cast<std::size_t>(i)] = n_ + i;
      } else {
        art_rows_.push_back(i);
        basis_[static_cast<std::size_t>(i)] = n_ + m_ + static_cast<Index>(art_rows_.size()) - 1;
      }
    }
    total_ = n_ + m_ + static_cast<Index>(art_rows_.size());
    in_basis_.assign(static_cast<std::size_t>(total_), -1);
    for (Index r = 0; r < m_; ++r) in_basis_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = r;

    binv_ = Matrix::Identity(m_, m_);
    for (std::size_t k = 0; k < art_rows_.size(); ++k) binv_(art_rows_[k], art_rows_[k]) = -1.0;
    cost_ = Vector::Zero(total_);
  }

  LpResult run() {
    LpResult result;
    if (!art_rows_.empty()) {
      phase_ = 1;
      cost_.setZero();
      cost_.tail(static_cast<Index>(art_rows_.size())).setOnes();
      const Outcome o = iterate();
      if (o == Outcome::failed) return finish(LpStatus::failed);
      // Phase one is bounded below by zero, so it always ends optimal.
      if (!refactor()) return finish(LpStatus::failed);
      double infeasibility = 0.0;
      for (Index r = 0; r < m_; ++r) {
        if (is_artificial(basis_[static_cast<std::size_t>(r)])) infeasibility += std::max(0.0, xb_[r]);
      }
      const double scale = std::max(1.0, b_.cwiseAbs().maxCoeff());
      if (infeasibility > opt_.feasibility_tol * scale) return finish(LpStatus::infeasible);
      drive_out_artificials();
    }

    phase_ = 2;
    bland_ = false;
    degenerate_run_ = 0;
    cost_.setZero();
    cost_.head(n_) = c_;
    const Outcome o = iterate();
    if (o == Outcome::failed) return finish(LpStatus::failed);
    if (o == Outcome::unbounded) return finish(LpStatus::unbounded);
    if (!refactor()) return finish(LpStatus::failed);

    Vector v = Vector::Zero(n_);
    for (Index r = 0; r < m_; ++r) {
      const Index j = basis_[static_cast<std::size_t>(r)];
      if (j < n_) v[j] = xb_[r];
    }
    const double scale = std::max(1.0, b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0);
    if (m_ > 0 && (a_ * v - b_).maxCoeff() > 10.0 * opt_.feasibility_tol * scale) {
      return finish(LpStatus::failed);
    }
    result = finish(LpStatus::optimal);
    result.value = c_.dot(v);
    result.solution = std::move(v);
    return result;
  }

 private:
  enum class Outcome { optimal, unbounded, failed };

  bool is_artificial(Index j) const { return j >= n_ + m_; }

  double lower(Index j) const { return j < n_ ? -kInf : 0.0; }
  double upper(Index j) const {
    if (is_artificial(j) && phase_ == 2) return 0.0;
    return kInf;
  }

  // B^-1 times column j of [A | I | -E_art].
  Vector ftran(Index j) const {
    if (j < n_) return binv_ * a_.col(j);
    if (j < n_ + m_) return binv_.col(j - n_);
    return -binv_.col(art_rows_[static_cast<std::size_t>(j - n_ - m_)]);
  }

  double column_dot(const Vector& y, Index j) const {
    if (j < n_) return y.dot(a_.col(j));
    if (j < n_ + m_) return y[j - n_];
    return -y[art_rows_[static_cast<std::size_t>(j - n_ - m_)]];
  }

  Vector column(Index j) const {
    if (j < n_) return a_.col(j);
    Vector e = Vector::Zero(m_);
    if (j < n_ + m_) {
      e[j - n_] = 1.0;
    } else {
      e[art_rows_[static_cast<std::size_t>(j - n_ - m_)]] = -1.0;
    }
    return e;
  }

  bool refactor() {
    Matrix basis(m_, m_);
    for (Index r = 0; r < m_; ++r) basis.col(r) = column(basis_[static_cast<std::size_t>(r)]);
    Eigen::PartialPivLU<Matrix> lu(basis);
    binv_ = lu.inverse();
    if (!binv_.allFinite()) return false;
    xb_ = binv_ * b_;
    return xb_.allFinite();
  }

  void pivot(Index r, Index entering, const Vector& alpha) {
    const Vector pivot_row = binv_.row(r) / alpha[r];
    binv_.noalias() -= alpha * pivot_row.transpose();
    binv_.row(r) = pivot_row;
    const Index leaving = basis_[static_cast<std::size_t>(r)];
    in_basis_[static_cast<std::size_t>(leaving)] = -1;
    in_basis_[static_cast<std::size_t>(entering)] = r;
    basis_[static_cast<std::size_t>(r)] = entering;
  }

  Outcome iterate() {
    if (!refactor()) return Outcome::failed;
    int since_refactor = 0;
    const double cost_scale = 1.0 + cost_.cwiseAbs().maxCoeff();
    const double dtol = opt_.optimality_tol * cost_scale;

    for (;;) {
      if (iterations_ >= max_iterations_) return Outcome::failed;

      Vector cb(m_);
      for (Index r = 0; r < m_; ++r) cb[r] = cost_[basis_[static_cast<std::size_t>(r)]];
      const Vector y = binv_.transpose() * cb;

      // Pricing.
      Index entering = -1;
      double dir = 0.0;
      double best = 0.0;
      for (Index j = 0; j < total_; ++j) {
        if (in_basis_[static_cast<std::size_t>(j)] >= 0) continue;
        if (lower(j) == upper(j)) continue;
        const double d = cost_[j] - column_dot(y, j);
        double gain = 0.0;
        double s = 0.0;
        if (d < -dtol && upper(j) == kInf) {
          gain = -d;
          s = 1.0;
        } else if (d > dtol && lower(j) == -kInf) {
          gain = d;
          s = -1.0;
        }
        if (s == 0.0) continue;
        if (bland_) {
          entering = j;
          dir = s;
          break;
        }
        if (gain > best) {
          best = gain;
          entering = j;
          dir = s;
        }
      }
      if (entering < 0) return Outcome::optimal;

      const Vector alpha = ftran(entering);

      // Ratio test. Basic variable r moves by -theta * dir * alpha_r.
      Index leave = -1;
      double theta = kInf;
      if (bland_) {
        for (Index r = 0; r < m_; ++r) {
          const double ratio = bound_ratio(r, dir * alpha[r], 0.0);
          if (ratio == kInf) continue;
          const double clamped = std::max(0.0, ratio);
          if (leave < 0 || clamped < theta - 1e-12 ||
              (clamped <= theta + 1e-12 &&
               basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
            theta = std::min(theta, clamped);
            leave = r;
          }
        }
      } else {
        double relaxed = kInf;
        for (Index r = 0; r < m_; ++r) {
          relaxed = std::min(relaxed, bound_ratio(r, dir * alpha[r], opt_.feasibility_tol));
        }
        if (relaxed < kInf) {
          double best_pivot = 0.0;
          for (Index r = 0; r < m_; ++r) {
            const double ratio = bound_ratio(r, dir * alpha[r], 0.0);
            if (ratio == kInf || ratio > relaxed) continue;
            if (std::abs(alpha[r]) > best_pivot) {
              best_pivot = std::abs(alpha[r]);
              leave = r;
              theta = std::max(0.0, ratio);
            }
          }
        }
      }
      if (leave < 0) {
        if (phase_ == 1) return Outcome::failed;
        return Outcome::unbounded;
      }

      degenerate_run_ = theta <= 1e-12 ? degenerate_run_ + 1 : 0;
      if (degenerate_run_ >= opt_.degenerate_pivots_before_bland) bland_ = true;

      pivot(leave, entering, alpha);
      ++iterations_;
      if (++since_refactor >= refactor_every_) {
        if (!refactor()) return Outcome::failed;
        since_refactor = 0;
      } else {
        xb_ = binv_ * b_;
      }
    }
  }

  // Step length at which basic variable r hits a bound when it changes at
  // rate -delta; infinity when it never does.
  double bound_ratio(Index r, double delta, double slack_tol) const {
    const Index j = basis_[static_cast<std::size_t>(r)];
    if (delta > opt_.pivot_tol) {
      const double lb = lower(j);
      if (lb == -kInf) return kInf;
      return (xb_[r] - lb + slack_tol) / delta;
    }
    if (delta < -opt_.pivot_tol) {
      const double ub = upper(j);
      if (ub == kInf) return kInf;
      return (ub - xb_[r] + slack_tol) / -delta;
    }
    return kInf;
  }

  void drive_out_artificials() {
    for (Index r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[static_cast<std::size_t>(r)])) continue;
      const Vector row = binv_.row(r).transpose();
      Index best_j = -1;
      double best_val = 1e-9;
      for (Index j = 0; j < n_ + m_; ++j) {
        if (in_basis_[static_cast<std::size_t>(j)] >= 0) continue;
        const double v = std::abs(column_dot(row, j));
        if (v > best_val) {
          best_val = v;
          best_j = j;
        }
      }
      // No candidate: the row is redundant and the artificial stays basic,
      // fixed at zero for phase two.
      if (best_j >= 0) pivot(r, best_j, ftran(best_j));
    }
    refactor();
  }

  LpResult finish(LpStatus status) const {
    LpResult r;
    r.status = status;
    r.iterations = iterations_;
    return r;
  }

  const Matrix& a_;
  const Vector& b_;
  const Vector& c_;
  LpOptions opt_;
  Index m_;
  Index n_;
  Index total_ = 0;
  std::vector<Index> art_rows_;
  std::vector<Index> basis_;
  std::vector<Index> in_basis_;
  Matrix binv_;
  Vector xb_;
  Vector cost_;
  int phase_ = 1;
  bool bland_ = false;
  int degenerate_run_ = 0;
  int iterations_ = 0;
  int max_iterations_ = 0;
  int refactor_every_ = 64;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& options) {
  require_dim(lp.b.size(), lp.A.rows(), "LP right-hand side");
  require_dim(lp.objective.size(), lp.A.cols(), "LP objective");
  if (!lp.A.allFinite() || !lp.b.allFinite() || !lp.objective.allFinite()) {
    throw std::invalid_argument("LP: non-finite data");
  }
  return RevisedSimplex(lp, options).run();
}

MaxAffineMinimum minimize_max_affine(const MaxAffineModel& model, const Polytope& region) {
  require_dim(region.dim(), model.dim(), "minimize_max_affine region");
  const Index d = model.dim();
  const Index k = model.size();
  const Index r = region.rows();

  LinearProgram lp;
  lp.objective = Vector::Zero(d + 1);
  lp.objective[d] = 1.0;
  lp.A = Matrix::Zero(k + r, d + 1);
  lp.b.resize(k + r);
  lp.A.topLeftCorner(k, d) = model.slopes();
  lp.A.col(d).head(k).setConstant(-1.0);
  lp.b.head(k) = -model.intercepts();
  lp.A.bottomLeftCorner(r, d) = region.Q();
  lp.b.tail(r) = region.c();

  const LpResult res = solve_lp(lp);
  switch (res.status) {
    case LpStatus::optimal: break;
    case LpStatus::infeasible: throw LpInfeasible("minimize_max_affine: empty region");
    case LpStatus::unbounded: throw LpUnbounded("minimize_max_affine: objective unbounded below");
    case LpStatus::failed: throw NumericError("minimize_max_affine: simplex breakdown");
  }
  MaxAffineMinimum out;
  out.x = res.solution->head(d);
  out.value = model(out.x);
  return out;
}

ChebyshevBall chebyshev_center(const Polytope& region) {
  const Index d = region.dim();
  const Index r = region.rows();

  LinearProgram lp;
  lp.objective = Vector::Zero(d + 1);
  lp.objective[d] = -1.0;
  lp.A = Matrix::Zero(r + 1, d + 1);
  lp.b = Vector::Zero(r + 1);
  lp.A.topLeftCorner(r, d) = region.Q();
  lp.A.col(d).head(r) = region.Q().rowwise().norm();
  lp.b.head(r) = region.c();
  lp.A(r, d) = -1.0;

  const LpResult res = solve_lp(lp);
  switch (res.status) {
    case LpStatus::optimal: break;
    case LpStatus::infeasible: throw LpInfeasible("chebyshev_center: empty region");
    case LpStatus::unbounded: throw LpUnbounded("chebyshev_center: region contains arbitrarily large balls");
    case LpStatus::failed: throw NumericError("chebyshev_center: simplex breakdown");
  }
  return {res.solution->head(d), std::max(0.0, (*res.solution)[d])};
}

}  // namespace cvxadp
