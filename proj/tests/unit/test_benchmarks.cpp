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


#include <doctest.h>

#include <cmath>

#include "cvxadp/benchmarks.hpp"

using namespace cvxadp;

namespace {

double sample_mean(const TruncatedNormalSpec& s, int n, std::uint64_t seed) {
  Rng rng(seed);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = sample_truncated_normal(s, rng);
    REQUIRE(v >= s.lower);
    REQUIRE(v <= s.upper);
    sum += v;
  }
  return sum / n;
}

// Stage cost is linear in x for the brewery.
double lp_max(const Polytope& region, const Vector& gain) {
  LinearProgram lp{-gain, region.Q(), region.c()};
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  return -*r.value;
}

}  // namespace

TEST_CASE("truncated normal") {
  SUBCASE("symmetric interval keeps the mean") {
    const TruncatedNormalSpec s{0.0, 1.0, -1.0, 1.0};
    CHECK(s.expectation() == doctest::Approx(0.0));
    CHECK(std::abs(sample_mean(s, 100000, 1)) <= 0.01);
  }
  SUBCASE("one-sided truncation matches the closed form") {
    const TruncatedNormalSpec s{5.0, 1.5, 0.0, 15.0};
    CHECK(std::abs(sample_mean(s, 100000, 2) - s.expectation()) <= 0.01);
    const TruncatedNormalSpec half{0.0, 1.0, 0.0, 50.0};
    CHECK(half.expectation() == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-9));
  }
  SUBCASE("tiny interval") {
    const TruncatedNormalSpec s{0.0, 1.0, 0.3, 0.3 + 1e-9};
    CHECK(std::abs(sample_mean(s, 1000, 3) - 0.3) <= 1e-8);
  }
  SUBCASE("far tail") {
    const TruncatedNormalSpec s{0.0, 1.0, 8.0, 9.0};
    const double m = sample_mean(s, 20000, 4);
    CHECK(std::abs(m - s.expectation()) <= 0.01);
    CHECK(s.expectation() > 8.0);
    CHECK(s.expectation() < 8.2);
  }
  SUBCASE("bad specs") {
    CHECK_THROWS_AS((TruncatedNormalSpec{0, 0, -1, 1}.validate()), InputError);
    CHECK_THROWS_AS((TruncatedNormalSpec{0, 1, 1, -1}.validate()), InputError);
  }
}

TEST_CASE("energy problem shape") {
  const EnergyConfig cfg = EnergyConfig::defaults();
  const SPProblem p = build_energy_problem(cfg);
  CHECK(p.horizon == 48);
  CHECK(p.recourse(1).rows() == energy::kRows);
  CHECK(p.recourse(1).cols() == energy::kDim);
  CHECK(p.initial_z.size() == 2);
  CHECK(p.initial_z[0] == doctest::Approx(cfg.energy[0].expectation()));
  CHECK(cfg.truncated(6).demand.size() == 7);
  CHECK_THROWS_AS(EnergyConfig::defaults(0), InputError);
}

TEST_CASE("energy constraint set") {
  const EnergyConfig cfg = EnergyConfig::defaults(4);
  const SPProblem p = build_energy_problem(cfg);
  Vector prev = Vector::Zero(energy::kDim);
  prev[energy::kS] = 5.0;
  prev[energy::kES] = 1.0;
  prev[energy::kSD] = 2.0;  // storage after stage: 4

  SUBCASE("no energy and no demand leave only grid charging") {
    const Polytope region = p.constraint_set(2, prev, Vector::Zero(2));
    for (Index f : {energy::kES, energy::kED, energy::kEG, energy::kSD}) {
      Vector gain = Vector::Zero(energy::kDim);
      gain[f] = 1.0;
      CHECK(lp_max(region, gain) <= 1e-9);
    }
    Vector gain = Vector::Zero(energy::kDim);
    gain[energy::kGS] = 1.0;
    CHECK(lp_max(region, gain) == doctest::Approx(cfg.r_c));
  }
  SUBCASE("storage level is pinned by the balance") {
    Vector z(2);
    z << 3.0, 2.0;
    const Polytope region = p.constraint_set(2, prev, z);
    Vector gain = Vector::Zero(energy::kDim);
    gain[energy::kS] = 1.0;
    CHECK(lp_max(region, gain) == doctest::Approx(4.0));
    CHECK(-lp_max(region, -gain) == doctest::Approx(4.0));
  }
}

TEST_CASE("energy reference policies") {
  SUBCASE("no storage") {
    auto a = energy_no_storage_policy(5, 3);
    CHECK(a[1] == 3.0);  // ed
    CHECK(a[2] == 2.0);  // eg
    CHECK(a[0] + a[3] + a[4] + a[5] == 0.0);
    auto b = energy_no_storage_policy(2, 7);
    CHECK(b[1] == 2.0);
    CHECK(b[2] == 0.0);
  }
  const EnergyConfig cfg = EnergyConfig::defaults();
  SUBCASE("night charges an empty store") {
    REQUIRE(cfg.retail[0] < cfg.retail[12]);
    auto a = energy_heuristic_policy(0.0, 0.0, 3.0, 1, cfg);
    CHECK(a[5] == doctest::Approx(cfg.r_c));
  }
  SUBCASE("final stage drains the store") {
    auto a = energy_heuristic_policy(10.0, 0.0, 2.0, cfg.horizon, cfg);
    CHECK(a[3] == doctest::Approx(2.0));
    CHECK(a[4] == doctest::Approx(8.0));
    CHECK(a[5] == 0.0);
  }
  SUBCASE("policies stay feasible over whole episodes") {
    const SPProblem p = build_energy_problem(cfg);
    CHECK(evaluate_policy(p, energy_no_storage(cfg), 20, 3).max_violation <= 1e-9);
    CHECK(evaluate_policy(p, energy_heuristic(cfg), 20, 3).max_violation <= 1e-9);
  }
}

TEST_CASE("brewery matrices") {
  const BreweryConfig cfg = BreweryConfig::defaults(6);
  const Matrix F = cfg.fermentation();
  CHECK(F.rows() == 9);
  CHECK(F.cols() == 16);
  CHECK(F(4, 3) == 1.0);
  CHECK(F(4, 4) == 1.0);
  CHECK(F(3, 3) == 0.0);
  CHECK(F(6, 5) == 1.0);
  CHECK(F.rightCols(7).isZero());
  const Matrix B = cfg.brewing();
  for (Index i = 0; i < 3; ++i) CHECK(B(i, 1) == -cfg.lager_recipe[static_cast<std::size_t>(i)]);
  CHECK(B(3, 0) == 1.0);
  CHECK(B(5, 1) == 1.0);
  const Vector c = cfg.cost_vector();
  CHECK(c[14] == -90.0);
  CHECK(c[15] == -50.0);
}

TEST_CASE("brewery dynamics") {
  const BreweryConfig cfg = BreweryConfig::defaults(6);
  const SPProblem p = build_brewery_problem(cfg);
  Vector z(2);
  z << 5.0, 5.0;

  SUBCASE("an empty factory cannot sell") {
    const Polytope region = p.constraint_set(1, p.initial_x, z);
    Vector gain = Vector::Zero(16);
    gain[14] = gain[15] = 1.0;
    CHECK(lp_max(region, gain) <= 1e-9);
  }
  SUBCASE("beer moves one stage per period") {
    Vector prev = Vector::Zero(16);
    prev[3] = 2.0;  // young ale
    prev[4] = 1.0;  // ale stock
    const Polytope region = p.constraint_set(2, prev, z);
    Vector gain = Vector::Zero(16);
    gain[14] = 1.0;
    CHECK(lp_max(region, gain) == doctest::Approx(3.0));
    gain.setZero();
    gain[4] = 1.0;  // ale stock after selling nothing
    CHECK(lp_max(region, gain) == doctest::Approx(3.0));
  }
  SUBCASE("sales are capped by demand") {
    Vector prev = Vector::Zero(16);
    prev[4] = 20.0;
    Vector small(2);
    small << 1.5, 0.0;
    Vector gain = Vector::Zero(16);
    gain[14] = 1.0;
    CHECK(lp_max(p.constraint_set(2, prev, small), gain) == doctest::Approx(1.5));
  }
}

TEST_CASE("brewery deterministic plan") {
  SUBCASE("no demand, nothing to do") {
    const BreweryConfig cfg = BreweryConfig::defaults(4);
    const DeterministicPlan plan = brewery_deterministic_baseline(cfg, Matrix::Zero(4, 2));
    CHECK(plan.revenue == doctest::Approx(0.0).scale(1.0));
    CHECK(plan.decisions.cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("replaying the plan on the expected demand recovers its revenue") {
    const BreweryConfig cfg = BreweryConfig::defaults(6);
    const DeterministicPlan plan = brewery_deterministic_baseline(cfg);
    CHECK(plan.revenue > 0.0);
    SPProblem p = build_brewery_problem(cfg);
    p.sample_disturbance = [cfg](int t, Rng&) {
      const auto& pair = cfg.demand[static_cast<std::size_t>(t)];
      Vector z(2);
      z << pair[0].expectation(), pair[1].expectation();
      return z;
    };
    const EvaluationReport rep = evaluate_policy(p, replay_plan(plan.decisions), 1, 5);
    CHECK(rep.mean == doctest::Approx(plan.revenue).epsilon(1e-6));
  }
  SUBCASE("replay on random demand stays feasible") {
    const BreweryConfig cfg = BreweryConfig::defaults(6);
    const DeterministicPlan plan = brewery_deterministic_baseline(cfg);
    const EvaluationReport rep = evaluate_policy(build_brewery_problem(cfg), replay_plan(plan.decisions), 20, 6);
    CHECK(rep.max_violation <= 1e-7);
  }
  SUBCASE("wrong demand shape") {
    CHECK_THROWS_AS(brewery_deterministic_baseline(BreweryConfig::defaults(4), Matrix::Zero(3, 2)),
                    DimensionError);
  }
}

TEST_CASE("every sampled state has a successor") {
  for (const SPProblem& p : {build_energy_problem(EnergyConfig::defaults(6)),
                             build_brewery_problem(BreweryConfig::defaults(6))}) {
    CAPTURE(p.name);
    const SampleBank bank = forward_pass(p, 20, 3, 9);
    for (int t = 1; t < p.horizon; ++t) {
      const auto ut = static_cast<std::size_t>(t);
      for (Index i = 0; i < bank.decisions[ut].rows(); ++i) {
        for (Index j = 0; j < bank.disturbances[ut].rows(); ++j) {
          const Polytope next = p.constraint_set(t + 1, bank.decisions[ut].row(i).transpose(),
                                                 bank.disturbances[ut].row(j).transpose());
          CHECK(chebyshev_center(next).radius >= 0.0);
        }
      }
    }
  }
}
