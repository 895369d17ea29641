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
 * @file maxaffine.hpp
 * @brief Max-affine functions f(x) = max_k a_k.x + b_k and the two maps
 * between models and data partitions used by convex regression:
 *
 *   model -> partition   assign each point to the hyperplane attaining the max
 *   partition -> model   ridge least squares fit of every cell
 */

#include <span>
#include <vector>

#include "cvxadp/common.hpp"

namespace cvxadp {

inline constexpr double kDefaultRidge = 1e-6;

/// n points in R^d (one per row) with one target each.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Matrix points, Vector targets);

  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  const Vector& targets() const { return targets_; }
  auto point(Index i) const { return points_.row(i).transpose(); }
  double target(Index i) const { return targets_[i]; }

  Dataset subset(std::span<const Index> indices) const;

 private:
  Matrix points_;
  Vector targets_;
};

struct Hyperplane {
  Vector slope;
  double intercept = 0.0;

  double operator()(const Eigen::Ref<const Vector>& x) const {
    return slope.dot(x) + intercept;
  }
};

/// Ordered, nonempty set of hyperplanes sharing one dimension. Slopes are
/// stored row-wise so that whole datasets evaluate as one matrix product.
class MaxAffineModel {
 public:
  MaxAffineModel() = default;
  explicit MaxAffineModel(std::span<const Hyperplane> hyperplanes);
  MaxAffineModel(Matrix slopes, Vector intercepts);

  static MaxAffineModel constant(Index dim, double value);

  Index size() const { return slopes_.rows(); }
  Index dim() const { return slopes_.cols(); }
  Hyperplane hyperplane(Index k) const { return {slopes_.row(k).transpose(), intercepts_[k]}; }
  std::vector<Hyperplane> hyperplanes() const;
  const Matrix& slopes() const { return slopes_; }
  const Vector& intercepts() const { return intercepts_; }

  double operator()(const Eigen::Ref<const Vector>& x) const;

  /// K x n matrix of affine values a_k.x_i + b_k.
  Matrix affine_values(const Matrix& points) const;

  bool operator==(const MaxAffineModel& other) const {
    return slopes_ == other.slopes_ && intercepts_ == other.intercepts_;
  }

 private:
  Matrix slopes_;
  Vector intercepts_;
};

double eval(const MaxAffineModel& model, const Eigen::Ref<const Vector>& x);

/// Values of the model at every point of a dataset.
Vector eval_all(const MaxAffineModel& model, const Matrix& points);

/// Mean squared residual over the dataset.
double empirical_risk(const MaxAffineModel& model, const Dataset& data);

using Cell = std::vector<Index>;

/// Disjoint nonempty cells covering {0..n-1}.
class Partition {
 public:
  Partition() = default;
  /// Throws std::invalid_argument unless the cells partition {0..n-1}.
  Partition(std::vector<Cell> cells, Index n);

  static Partition trivial(Index n);

  std::size_t size() const { return cells_.size(); }
  const Cell& operator[](std::size_t k) const { return cells_[k]; }
  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t smallest_cell() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<Cell> cells_;
};

/// Assigns every point to the lowest-index hyperplane attaining the max.
/// Hyperplanes that win no point contribute no cell; cells are listed in
/// hyperplane order. `owners`, if given, receives the hyperplane index of
/// each returned cell.
Partition induced_partition(const MaxAffineModel& model, const Dataset& data,
                            std::vector<Index>* owners = nullptr);

/// Ridge-regularized least squares fit of one cell:
///   a = (sum D D^T + beta I)^-1 sum D y,  b = mean(y - a.x),
/// with D the cell-centered points.
Hyperplane fit_cell(const Dataset& data, std::span<const Index> cell, double beta = kDefaultRidge);

/// One hyperplane per cell, in cell order.
MaxAffineModel fit_partition(const Dataset& data, const Partition& partition,
                             double beta = kDefaultRidge);

/// x_raw -> matrix * (x_raw - offset); predictions are multiplied by
/// output_scale.
struct AffineMap {
  Matrix matrix;  // d_out x d_in
  Vector offset;  // d_in
  double output_scale = 1.0;

  static AffineMap identity(Index dim);

  Index input_dim() const { return matrix.cols(); }
  Index output_dim() const { return matrix.rows(); }
  Vector apply(const Eigen::Ref<const Vector>& x) const { return matrix * (x - offset); }
};

/// Returns g with g(x) = output_scale * model(matrix * (x - offset)).
MaxAffineModel compose_with_affine(const MaxAffineModel& model, const AffineMap& map);

}  // namespace cvxadp
