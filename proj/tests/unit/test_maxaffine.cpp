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

#include "cvxadp/maxaffine.hpp"
#include "oracles.hpp"

using namespace cvxadp;

namespace {

MaxAffineModel abs_model() {
  Matrix a(2, 1);
  a << 1, -1;
  return MaxAffineModel(a, Vector::Zero(2));
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double e : v) out[i++] = e;
  return out;
}

Dataset random_dataset(Rng& rng, Index n, Index d) {
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = standard_normal(rng);
  return Dataset(oracle::gaussian_matrix(rng, n, d), y);
}

}  // namespace

TEST_CASE("eval of |x| and of a constant") {
  CHECK(eval(abs_model(), vec({0.5})) == 0.5);
  const auto c = MaxAffineModel::constant(3, 3.0);
  CHECK(eval(c, vec({1, -2, 7})) == 3.0);
}

TEST_CASE("eval matches brute-force enumeration") {
  Rng rng(11);
  const auto m = oracle::random_model(rng, 5, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = oracle::gaussian_matrix(rng, 3, 1);
    CHECK(eval(m, x) == doctest::Approx(oracle::brute_max_affine(m, x)).epsilon(1e-14));
  }
}

TEST_CASE("eval rejects a dimension mismatch") {
  CHECK_THROWS_AS(eval(abs_model(), vec({1, 2})), DimensionError);
}

TEST_CASE("eval is convex along random segments") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_model(rng, 6, 4);
    const Vector x1 = oracle::gaussian_matrix(rng, 4, 1);
    const Vector x2 = oracle::gaussian_matrix(rng, 4, 1);
    const double lambda = uniform01(rng);
    const double lhs = eval(m, lambda * x1 + (1 - lambda) * x2);
    const double rhs = lambda * eval(m, x1) + (1 - lambda) * eval(m, x2);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("empirical risk") {
  Matrix x(2, 1);
  x << 0, 1;
  SUBCASE("interpolating model has zero risk") {
    CHECK(empirical_risk(abs_model(), Dataset(x, vec({0, 1}))) == 0.0);
  }
  SUBCASE("zero model against +-1") {
    CHECK(empirical_risk(MaxAffineModel::constant(1, 0.0), Dataset(x, vec({1, -1}))) == 1.0);
  }
  SUBCASE("matches the per-point loop") {
    Rng rng(13);
    const auto m = oracle::random_model(rng, 4, 3);
    const Dataset d = random_dataset(rng, 50, 3);
    CHECK(std::abs(empirical_risk(m, d) - oracle::brute_risk(m, d)) <= 1e-12);
  }
}

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset(Matrix(0, 1), Vector(0)), InputError);
  CHECK_THROWS_AS(Dataset(Matrix::Zero(2, 1), Vector::Zero(3)), InputError);
  Matrix bad = Matrix::Zero(2, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Dataset(bad, Vector::Zero(2)), InputError);
}

TEST_CASE("induced partition") {
  Matrix x(2, 1);
  x << -1, 0.5;
  const Dataset d(x, Vector::Zero(2));
  SUBCASE("sign split") {
    const Partition p = induced_partition(abs_model(), d);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == Cell{1});
    CHECK(p[1] == Cell{0});
  }
  SUBCASE("tie goes to the lowest index") {
    Matrix z(1, 1);
    z << 0.0;
    const Partition p = induced_partition(abs_model(), Dataset(z, Vector::Zero(1)));
    REQUIRE(p.size() == 1);
    std::vector<Index> owners;
    induced_partition(abs_model(), Dataset(z, Vector::Zero(1)), &owners);
    CHECK(owners == std::vector<Index>{0});
  }
  SUBCASE("single hyperplane gives one cell") {
    const Partition p = induced_partition(MaxAffineModel::constant(1, 2.0), d);
    CHECK(p == Partition::trivial(2));
  }
  SUBCASE("hyperplanes that never win are dropped") {
    Matrix a(3, 1);
    a << 1, -1, 0;
    Vector b(3);
    b << 0, 0, -10;
    std::vector<Index> owners;
    const Partition p = induced_partition(MaxAffineModel(a, b), d, &owners);
    CHECK(p.size() == 2);
    CHECK(owners == std::vector<Index>{0, 1});
  }
}

TEST_CASE("partition invariants are enforced") {
  CHECK_THROWS(Partition({{0}, {0, 1}}, 2));
  CHECK_THROWS(Partition({{0}}, 2));
  CHECK_THROWS(Partition({{0, 1}, {}}, 2));
  CHECK_NOTHROW(Partition({{1}, {0}}, 2));
}

TEST_CASE("fit_partition examples") {
  SUBCASE("line through three points") {
    Matrix x(3, 1);
    x << 0, 1, 2;
    const Dataset d(x, vec({0, 2, 4}));
    const auto m = fit_partition(d, Partition::trivial(3), 1e-6);
    CHECK(m.slopes()(0, 0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(std::abs(m.intercepts()[0]) <= 1e-5);
  }
  SUBCASE("constant targets give an exactly zero slope") {
    Matrix x(4, 2);
    x << 0, 1, 3, -2, 5, 5, -1, 0.5;
    const Dataset d(x, Vector::Constant(4, 5.0));
    const auto m = fit_partition(d, Partition::trivial(4), 1e-6);
    CHECK(m.slopes().isZero(0.0));
    CHECK(m.intercepts()[0] == doctest::Approx(5.0).epsilon(1e-15));
  }
  SUBCASE("two cells of |x|") {
    const Index n = 40;
    Matrix x(n, 1);
    Vector y(n);
    Cell neg, pos;
    for (Index i = 0; i < n; ++i) {
      x(i, 0) = -2.0 + 4.0 * static_cast<double>(i) / (n - 1);
      y[i] = std::abs(x(i, 0));
      (x(i, 0) < 0 ? neg : pos).push_back(i);
    }
    const auto m = fit_partition(Dataset(x, y), Partition({neg, pos}, n), 1e-6);
    CHECK(m.slopes()(0, 0) == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(m.slopes()(1, 0) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("fit_cell is a stationary point of the ridge objective") {
  // Perturbing the fitted hyperplane cannot lower the cell's squared error
  // by more than what the ridge term accounts for.
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = random_dataset(rng, 30, 3);
    Cell cell;
    for (Index i = 0; i < 30; i += 2) cell.push_back(i);
    const double beta = 1e-6;
    const Hyperplane h = fit_cell(d, cell, beta);
    auto sse = [&](const Vector& a, double b) {
      double s = 0;
      for (Index i : cell) {
        const double r = a.dot(d.point(i)) + b - d.target(i);
        s += r * r;
      }
      return s;
    };
    const double base = sse(h.slope, h.intercept);
    for (int p = 0; p < 20; ++p) {
      const Vector da = 1e-3 * oracle::gaussian_matrix(rng, 3, 1);
      const double db = 1e-3 * standard_normal(rng);
      const double ridge_gain = 2.0 * beta * h.slope.dot(da) + beta * da.squaredNorm();
      CHECK(sse(h.slope + da, h.intercept + db) >= base - std::abs(ridge_gain) - 1e-6);
    }
  }
}

TEST_CASE("partition then refit never grows K") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = oracle::random_model(rng, 7, 2);
    const Dataset d = random_dataset(rng, 25, 2);
    const auto refit = fit_partition(d, induced_partition(m, d));
    CHECK(refit.size() <= m.size());
  }
}

TEST_CASE("refinements of the trivial partition never raise the risk") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset d = random_dataset(rng, 40, 2);
    const double single = empirical_risk(fit_partition(d, Partition::trivial(40)), d);
    std::vector<Cell> cells(3);
    for (Index i = 0; i < 40; ++i) cells[static_cast<std::size_t>(i % 3)].push_back(i);
    const Partition p(cells, 40);
    // Residuals of each point against its own cell's hyperplane. The max
    // over all cell fits can be worse than the single fit for arbitrary
    // cells, so that is not what is compared here.
    const auto m = fit_partition(d, p);
    double sse = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      for (Index i : p[k]) {
        const double r = m.hyperplane(static_cast<Index>(k))(d.point(i)) - d.target(i);
        sse += r * r;
      }
    }
    CHECK(sse / 40.0 <= single + 1e-9);
  }
}

TEST_CASE("compose_with_affine") {
  SUBCASE("identity leaves the model unchanged") {
    Rng rng(31);
    const auto m = oracle::random_model(rng, 3, 2);
    const auto g = compose_with_affine(m, AffineMap::identity(2));
    CHECK(g.slopes().isApprox(m.slopes()));
    CHECK(g.intercepts().isApprox(m.intercepts()));
  }
  SUBCASE("x -> (x - 1) / 2 with scale 3") {
    AffineMap map{Matrix::Constant(1, 1, 0.5), Vector::Constant(1, 1.0), 3.0};
    const auto g = compose_with_affine(MaxAffineModel(Matrix::Constant(1, 1, 2.0), Vector::Zero(1)), map);
    CHECK(g.slopes()(0, 0) == doctest::Approx(3.0));
    CHECK(g.intercepts()[0] == doctest::Approx(-3.0));
  }
  SUBCASE("pointwise agreement on random maps") {
    Rng rng(32);
    const auto m = oracle::random_model(rng, 4, 2);
    AffineMap map{oracle::gaussian_matrix(rng, 2, 3), oracle::gaussian_matrix(rng, 3, 1), 2.5};
    const auto g = compose_with_affine(m, map);
    for (int i = 0; i < 100; ++i) {
      const Vector x = oracle::gaussian_matrix(rng, 3, 1);
      CHECK(std::abs(g(x) - map.output_scale * m(map.apply(x))) <= 1e-10);
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(compose_with_affine(abs_model(), AffineMap::identity(2)), DimensionError);
  }
}
