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

#include "cvxadp/fadp.hpp"

#include <cmath>
#include <numeric>

#include "cvxadp/parallel.hpp"
#include "cvxadp/sampler.hpp"

namespace cvxadp {

void SPProblem::validate() const {
  if (horizon < 1) throw std::invalid_argument(name + ": horizon must be >= 1");
  if (decision_dims.size() != static_cast<std::size_t>(horizon) + 1) {
    throw std::invalid_argument(name + ": need decision dimensions for stages 0..T");
  }
  require_dim(initial_x.size(), decision_dims.front(), "initial decision");
  if (!stage_cost || !recourse || !coupling || !rhs || !sample_disturbance) {
    throw std::invalid_argument(name + ": incomplete problem definition");
  }
}

Polytope SPProblem::constraint_set(int t, const Vector& x_prev, const Vector& z_prev) const {
  if (t < 1 || t > horizon) throw std::out_of_range("constraint_set: stage out of range");
  Matrix q = recourse(t);
  return Polytope(std::move(q), rhs(t, z_prev) - coupling(t, z_prev) * x_prev);
}

double EvaluationReport::standard_error() const {
  return episodes > 0 ? std / std::sqrt(static_cast<double>(episodes)) : 0.0;
}

SampleBank forward_pass(const SPProblem& problem, Index n, Index m, std::uint64_t seed) {
  problem.validate();
  if (n < 1 || m < 1) throw std::invalid_argument("forward_pass: need n >= 1 and m >= 1");
  const int T = problem.horizon;

  SampleBank bank;
  bank.decisions.resize(static_cast<std::size_t>(T) + 1);
  bank.disturbances.resize(static_cast<std::size_t>(T) + 1);
  bank.targets.resize(static_cast<std::size_t>(T) + 1);
  bank.info.resize(static_cast<std::size_t>(T) + 1);
  bank.decisions[0] = problem.initial_x.transpose().replicate(n, 1);
  bank.disturbances[0] = problem.initial_z.transpose().replicate(m, 1);

  for (int t = 0; t < T; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    const Matrix& xs_mat = bank.decisions[ut];
    const Matrix& zs_mat = bank.disturbances[ut];

    std::vector<Vector> xs;
    for (Index i = 0; i < xs_mat.rows(); ++i) xs.emplace_back(xs_mat.row(i).transpose());
    std::vector<Matrix> couplings;
    std::vector<Vector> rhs;
    for (Index j = 0; j < zs_mat.rows(); ++j) {
      const Vector z = zs_mat.row(j).transpose();
      couplings.push_back(problem.coupling(t + 1, z));
      rhs.push_back(problem.rhs(t + 1, z));
    }
    const Polytope hull = reachable_polytope(problem.recourse(t + 1), couplings, rhs, xs);

    HitAndRunConfig cfg;
    cfg.seed = stream_seed(seed, "forward", static_cast<std::uint64_t>(t + 1));
    PolytopeSample sample;
    try {
      sample = sample_polytope(hull, n, cfg);
    } catch (const NumericError& e) {
      throw NumericError("forward pass, stage " + std::to_string(t + 1) + ": " + e.what());
    }
    bank.decisions[ut + 1] = std::move(sample.points);
    bank.info[ut + 1] = {sample.affine_dim, sample.reduced, sample.degenerate};

    std::vector<Vector> draws(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) {
      Rng rng = make_stream(seed, "disturbance", static_cast<std::uint64_t>(t + 1),
                            static_cast<std::uint64_t>(j));
      draws[static_cast<std::size_t>(j)] = problem.sample_disturbance(t + 1, rng);
    }
    Matrix zs(m, draws.front().size());
    for (Index j = 0; j < m; ++j) zs.row(j) = draws[static_cast<std::size_t>(j)].transpose();
    bank.disturbances[ut + 1] = std::move(zs);
  }
  return bank;
}

Vector backward_targets(const SPProblem& problem, int t, const SampleBank& bank,
                        const TrainedEstimate* next) {
  if (t < 1 || t > problem.horizon) throw std::out_of_range("backward_targets: stage out of range");
  if ((next == nullptr) != (t == problem.horizon)) {
    throw std::invalid_argument("backward_targets: next-stage estimate required for t < T only");
  }
  const Matrix& xs = bank.decisions.at(static_cast<std::size_t>(t));
  const Matrix& zs = bank.disturbances.at(static_cast<std::size_t>(t));
  const Index n = xs.rows();
  const Index m = zs.rows();

  std::vector<double> terms(static_cast<std::size_t>(n * m));
  parallel_for(terms.size(), [&](std::size_t task) {
    const Index i = static_cast<Index>(task) / m;
    const Index j = static_cast<Index>(task) % m;
    const Vector x = xs.row(i).transpose();
    const Vector z = zs.row(j).transpose();
    double value = problem.stage_cost(t, x, z);
    if (next) {
      try {
        value += minimize_max_affine(next->model, problem.constraint_set(t + 1, x, z)).value;
      } catch (const NumericError& e) {
        throw NumericError("backward pass at (t=" + std::to_string(t) + ", i=" + std::to_string(i) +
                           ", j=" + std::to_string(j) + "): " + e.what());
      }
    }
    terms[task] = value;
  });

  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Index j = 0; j < m; ++j) sum += terms[static_cast<std::size_t>(i * m + j)];
    y[i] = sum / static_cast<double>(m);
  }
  return y;
}

FadpResult run_fadp(const SPProblem& problem, Index n, Index m, const AmapParams& regressor,
                    std::uint64_t seed) {
  FadpResult out;
  out.bank = forward_pass(problem, n, m, seed);
  const int T = problem.horizon;
  out.stack.estimates.resize(static_cast<std::size_t>(T));

  for (int t = T; t >= 1; --t) {
    const TrainedEstimate* next = t < T ? &out.stack.at(t + 1) : nullptr;
    Vector y = backward_targets(problem, t, out.bank, next);
    out.bank.targets[static_cast<std::size_t>(t)] = y;

    AmapParams params = regressor;
    params.seed = stream_seed(seed, "amap", static_cast<std::uint64_t>(t), regressor.seed);
    out.stack.estimates[static_cast<std::size_t>(t - 1)] =
        train(Dataset(out.bank.decisions[static_cast<std::size_t>(t)], std::move(y)), params);
  }
  return out;
}

Vector greedy_action(const TrainedEstimate& estimate, const Polytope& region) {
  return minimize_max_affine(estimate.model, region).x;
}

Policy greedy_policy(const CostToGoStack& stack) {
  return [&stack](int t, const Vector&, const Vector&, const Polytope& region) {
    return greedy_action(stack.at(t), region);
  };
}

EvaluationReport evaluate_policy(const SPProblem& problem, const Policy& policy, int episodes,
                                 std::uint64_t seed) {
  problem.validate();
  if (episodes < 1) throw std::invalid_argument("evaluate_policy: need at least one episode");

  std::vector<double> revenue(static_cast<std::size_t>(episodes));
  std::vector<double> violation(static_cast<std::size_t>(episodes), 0.0);
  parallel_for(static_cast<std::size_t>(episodes), [&](std::size_t e) {
    Vector x = problem.initial_x;
    Vector z = problem.initial_z;
    double cost = 0.0;
    for (int t = 1; t <= problem.horizon; ++t) {
      const Polytope region = problem.constraint_set(t, x, z);
      Vector next;
      try {
        next = policy(t, x, z, region);
      } catch (const NumericError& err) {
        throw NumericError("evaluation episode " + std::to_string(e) + ", stage " +
                           std::to_string(t) + ": " + err.what());
      }
      violation[e] = std::max(violation[e], region.violation(next));
      Rng rng = make_stream(seed, "evaluation", e, static_cast<std::uint64_t>(t));
      z = problem.sample_disturbance(t, rng);
      cost += problem.stage_cost(t, next, z);
      x = std::move(next);
    }
    revenue[e] = -cost;
  });

  EvaluationReport report;
  report.episodes = episodes;
  report.episode_revenues = std::move(revenue);
  report.mean = std::accumulate(report.episode_revenues.begin(), report.episode_revenues.end(), 0.0) /
                static_cast<double>(episodes);
  if (episodes > 1) {
    double ss = 0.0;
    for (double r : report.episode_revenues) ss += (r - report.mean) * (r - report.mean);
    report.std = std::sqrt(ss / static_cast<double>(episodes - 1));
  }
  for (double v : violation) report.max_violation = std::max(report.max_violation, v);
  return report;
}

EvaluationReport evaluate_policy(const SPProblem& problem, const CostToGoStack& stack,
                                 int episodes, std::uint64_t seed) {
  if (stack.horizon() != problem.horizon) {
    throw InputError("cost-to-go stack has " + std::to_string(stack.horizon()) +
                     " stages, problem has " + std::to_string(problem.horizon));
  }
  for (int t = 1; t <= problem.horizon; ++t) {
    if (stack.at(t).model.dim() != problem.dim(t)) {
      throw InputError("cost-to-go estimate for stage " + std::to_string(t) +
                       " has the wrong dimension");
    }
  }
  return evaluate_policy(problem, greedy_policy(stack), episodes, seed);
}

}  // namespace cvxadp
