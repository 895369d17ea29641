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

/**
 * @file fadp.hpp
 * @brief Full approximate dynamic programming for convex multistage
 * stochastic programs with polyhedral decision sets
 *
 *   X_t(x_{t-1}, z_{t-1}) = {x : Q_t x + W_t(z_{t-1}) x_{t-1} <= c_t(z_{t-1})}.
 *
 * A forward pass samples decisions uniformly from the hull of everything
 * reachable from the previous stage's samples. A backward pass regresses
 * Monte-Carlo estimates of the cost-to-go (stage cost plus the LP minimum of
 * the next stage estimate) with AMAP. Policies are evaluated by greedy
 * minimization of the learned estimates.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cvxadp/amap.hpp"
#include "cvxadp/lp.hpp"
#include "cvxadp/rng.hpp"

namespace cvxadp {

/// Stages are numbered 1..horizon. Stage t's decision set depends on the
/// stage t-1 decision and the disturbance z_{t-1}; stage 0 is the fixed
/// initial pair (initial_x, initial_z).
struct SPProblem {
  std::string name;
  int horizon = 0;
  std::vector<Index> decision_dims;  // d_0 .. d_T
  Vector initial_x;
  Vector initial_z;

  std::function<double(int t, const Vector& x, const Vector& z)> stage_cost;
  std::function<Matrix(int t)> recourse;                          // Q_t
  std::function<Matrix(int t, const Vector& z_prev)> coupling;    // W_t(z_{t-1})
  std::function<Vector(int t, const Vector& z_prev)> rhs;         // c_t(z_{t-1})
  std::function<Vector(int t, Rng& rng)> sample_disturbance;      // Z_t, t >= 1

  void validate() const;
  Index dim(int t) const { return decision_dims.at(static_cast<std::size_t>(t)); }

  /// X_t(x_{t-1}, z_{t-1})
  Polytope constraint_set(int t, const Vector& x_prev, const Vector& z_prev) const;
};

struct CostToGoStack {
  std::vector<TrainedEstimate> estimates;  // [t - 1] holds J_t

  int horizon() const { return static_cast<int>(estimates.size()); }
  const TrainedEstimate& at(int t) const { return estimates.at(static_cast<std::size_t>(t - 1)); }
};

struct StageSampleInfo {
  Index affine_dim = 0;
  bool reduced = false;
  bool degenerate = false;
};

struct SampleBank {
  std::vector<Matrix> decisions;     // [t]: n x d_t, t = 0..T
  std::vector<Matrix> disturbances;  // [t]: m x dz, t = 0..T
  std::vector<Vector> targets;       // [t]: n, filled for t = 1..T
  std::vector<StageSampleInfo> info; // [t], t = 1..T meaningful

  Index n() const { return decisions.empty() ? 0 : decisions.front().rows(); }
  Index m() const { return disturbances.empty() ? 0 : disturbances.front().rows(); }
};

struct EvaluationReport {
  std::vector<double> episode_revenues;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  int episodes = 0;
  double max_violation = 0.0;  // worst constraint residual of any decision

  double standard_error() const;
};

/// Decisions and disturbances for every stage; targets are left empty.
/// Randomness comes from the ("forward", t) and ("disturbance", t, j)
/// streams of `seed`, so it is shared by every run with the same (n, m, seed).
SampleBank forward_pass(const SPProblem& problem, Index n, Index m, std::uint64_t seed);

/// Stage-t regression targets: averages over the m disturbances of the stage
/// cost plus the minimum of the next estimate over the next decision set.
/// `next` must be empty exactly when t is the horizon.
Vector backward_targets(const SPProblem& problem, int t, const SampleBank& bank,
                        const TrainedEstimate* next);

struct FadpResult {
  CostToGoStack stack;
  SampleBank bank;
};

FadpResult run_fadp(const SPProblem& problem, Index n, Index m, const AmapParams& regressor,
                    std::uint64_t seed);

/// Minimizer of the estimate over the region.
Vector greedy_action(const TrainedEstimate& estimate, const Polytope& region);

/// Decision rule for stage t given the previous decision, the previous
/// disturbance and the stage decision set.
using Policy =
    std::function<Vector(int t, const Vector& x_prev, const Vector& z_prev, const Polytope& region)>;

Policy greedy_policy(const CostToGoStack& stack);

/// Simulates episodes. Disturbances come from the ("evaluation", e, t)
/// streams of `seed`, so every policy sees the same trajectories of
/// disturbances.
EvaluationReport evaluate_policy(const SPProblem& problem, const Policy& policy, int episodes,
                                 std::uint64_t seed);

EvaluationReport evaluate_policy(const SPProblem& problem, const CostToGoStack& stack,
                                 int episodes, std::uint64_t seed);

}  // namespace cvxadp
