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
#include <numbers>

#include "cvxadp/lp.hpp"
#include "oracles.hpp"

using namespace cvxadp;

namespace {

LinearProgram lp1(double c, std::initializer_list<std::pair<double, double>> rows) {
  LinearProgram lp;
  lp.objective = Vector::Constant(1, c);
  lp.A.resize(static_cast<Index>(rows.size()), 1);
  lp.b.resize(static_cast<Index>(rows.size()));
  Index r = 0;
  for (auto [a, b] : rows) {
    lp.A(r, 0) = a;
    lp.b[r++] = b;
  }
  return lp;
}

Polytope box(Index d, double lo, double hi) {
  Matrix q(2 * d, d);
  q << Matrix::Identity(d, d), -Matrix::Identity(d, d);
  Vector c(2 * d);
  c << Vector::Constant(d, hi), Vector::Constant(d, -lo);
  return Polytope(q, c);
}

MaxAffineModel abs_model() {
  Matrix a(2, 1);
  a << 1, -1;
  return MaxAffineModel(a, Vector::Zero(2));
}

}  // namespace

TEST_CASE("solve_lp on one-dimensional examples") {
  SUBCASE("box") {
    const LpResult r = solve_lp(lp1(-1, {{1, 3}, {-1, 0}}));
    REQUIRE(r.status == LpStatus::optimal);
    CHECK((*r.solution)[0] == doctest::Approx(3.0));
    CHECK(*r.value == doctest::Approx(-3.0));
  }
  SUBCASE("empty") {
    CHECK(solve_lp(lp1(1, {{1, -1}, {-1, -2}})).status == LpStatus::infeasible);
  }
  SUBCASE("ray") {
    CHECK(solve_lp(lp1(-1, {{-1, 0}})).status == LpStatus::unbounded);
  }
  SUBCASE("result has no solution unless optimal") {
    const LpResult r = solve_lp(lp1(1, {{1, -1}, {-1, -2}}));
    CHECK_FALSE(r.solution.has_value());
    CHECK_FALSE(r.value.has_value());
  }
}

TEST_CASE("solve_lp handles degenerate vertices") {
  // Many constraints through the optimum (0, 0).
  LinearProgram lp;
  lp.objective = Vector(2);
  lp.objective << 1, 1;
  const int k = 12;
  lp.A.resize(k + 2, 2);
  lp.b = Vector::Zero(k + 2);
  for (int i = 0; i < k; ++i) {
    const double angle = 0.5 * std::numbers::pi * i / (k - 1);
    lp.A(i, 0) = -std::cos(angle);
    lp.A(i, 1) = -std::sin(angle);
  }
  lp.A.row(k) << 1, 0;
  lp.A.row(k + 1) << 0, 1;
  lp.b[k] = lp.b[k + 1] = 1.0;
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  const auto oracle = oracle::vertex_enumeration(lp);
  CHECK(*r.value == doctest::Approx(oracle.value).epsilon(1e-9));
}

TEST_CASE("solve_lp matches vertex enumeration") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + static_cast<int>(uniform_index(rng, 4));
    const int rows = 2 * d + static_cast<int>(uniform_index(rng, 12 - 2 * d + 1));
    const LinearProgram lp = oracle::random_bounded_lp(rng, d, rows);
    const LpResult r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::optimal);
    const auto o = oracle::vertex_enumeration(lp);
    REQUIRE(o.feasible);
    CHECK(std::abs(*r.value - o.value) <= 1e-6);
    CHECK(((lp.A * *r.solution - lp.b).array() <= 1e-7).all());
  }
}

TEST_CASE("solve_lp rejects non-finite data") {
  LinearProgram lp = lp1(1, {{1, 1}});
  lp.b[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS(solve_lp(lp));
}

TEST_CASE("minimize_max_affine examples") {
  SUBCASE("|x| over [-2, 5]") {
    const auto r = minimize_max_affine(abs_model(), box(1, -2, 5));
    CHECK(std::abs(r.x[0]) <= 1e-9);
    CHECK(std::abs(r.value) <= 1e-9);
  }
  SUBCASE("|x| over [1, 3]") {
    const auto r = minimize_max_affine(abs_model(), box(1, 1, 3));
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(1.0));
  }
  SUBCASE("empty region") {
    CHECK_THROWS_AS(minimize_max_affine(abs_model(), box(1, 2, 1)), LpInfeasible);
  }
  SUBCASE("unbounded below") {
    Matrix q(1, 1);
    q << 1;
    const Polytope half(q, Vector::Constant(1, 0.0));
    const MaxAffineModel rising(Matrix::Constant(1, 1, 1.0), Vector::Zero(1));
    CHECK_THROWS_AS(minimize_max_affine(rising, half), LpUnbounded);
  }
}

TEST_CASE("minimize_max_affine agrees with a grid search in 2-D") {
  Rng rng(102);
  for (int trial = 0; trial < 8; ++trial) {
    const MaxAffineModel m = oracle::random_model(rng, 4, 2);
    Matrix q(6, 2);
    Vector c(6);
    q.topRows(4) << Matrix::Identity(2, 2), -Matrix::Identity(2, 2);
    c.head(4).setOnes();
    q.bottomRows(2) = oracle::gaussian_matrix(rng, 2, 2);
    c.tail(2) << 0.3 + uniform01(rng), 0.3 + uniform01(rng);
    const Polytope region(q, c);
    const auto r = minimize_max_affine(m, region);
    CHECK(region.contains(r.x, 1e-7));
    CHECK(std::abs(r.value - m(r.x)) <= 1e-8);
    const auto grid = oracle::grid_minimum_2d([&](const Vector& x) { return m(x); }, region, -1, 1, 1e-2);
    REQUIRE(grid.has_value());
    CHECK(r.value <= *grid + 1e-9);
    CHECK(*grid - r.value <= 1e-4);
  }
}

TEST_CASE("LP value function is midpoint convex in the right-hand side") {
  // g(p) = min over {Q x <= c0 + P p} of a fixed max-affine function.
  Rng rng(103);
  const MaxAffineModel m = oracle::random_model(rng, 5, 3);
  Matrix q(9, 3);
  q.topRows(6) << Matrix::Identity(3, 3), -Matrix::Identity(3, 3);
  q.bottomRows(3) = oracle::gaussian_matrix(rng, 3, 3);
  const Vector c0 = Vector::Constant(9, 2.0);
  // |shift p| <= 1 < c0 on [-1, 1]^2, so the origin stays feasible.
  const Matrix shift = Matrix::Random(9, 2) * 0.5;
  auto g = [&](const Vector& p) { return minimize_max_affine(m, Polytope(q, c0 + shift * p)).value; };
  for (int trial = 0; trial < 40; ++trial) {
    const Vector p1 = Vector::Random(2);
    const Vector p2 = Vector::Random(2);
    const double lambda = uniform01(rng);
    CHECK(g(lambda * p1 + (1 - lambda) * p2) <= lambda * g(p1) + (1 - lambda) * g(p2) + 1e-6);
  }
}

TEST_CASE("chebyshev_center") {
  SUBCASE("unit box") {
    const ChebyshevBall b = chebyshev_center(box(2, -1, 1));
    CHECK(b.radius == doctest::Approx(1.0));
    CHECK(b.center.norm() <= 1e-9);
  }
  SUBCASE("simplex") {
    Matrix q(3, 2);
    q << -1, 0, 0, -1, 1, 1;
    const ChebyshevBall b = chebyshev_center(Polytope(q, Vector::Unit(3, 2)));
    CHECK(b.radius == doctest::Approx(1.0 / (2.0 + std::sqrt(2.0))).epsilon(1e-9));
  }
  SUBCASE("flat slab") {
    Matrix q(4, 2);
    q << 1, 0, -1, 0, 0, 1, 0, -1;
    Vector c(4);
    c << 0, 0, 1, 1;
    CHECK(chebyshev_center(Polytope(q, c)).radius <= 1e-12);
  }
  SUBCASE("empty") {
    CHECK_THROWS_AS(chebyshev_center(box(1, 1, 0)), LpInfeasible);
  }
}

TEST_CASE("polytope helpers") {
  const Polytope p = box(2, 0, 1);
  Vector x(2);
  x << 0.5, 1.5;
  CHECK(p.violation(x) == doctest::Approx(0.5));
  CHECK_FALSE(p.contains(x));
  x[1] = 1.0;
  CHECK(p.contains(x));
  CHECK_THROWS(Polytope(Matrix(0, 2), Vector(0)));
}
