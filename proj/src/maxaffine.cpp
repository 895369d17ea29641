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

#include "cvxadp/maxaffine.hpp"

#include <algorithm>
#include <limits>

namespace cvxadp {

Dataset::Dataset(Matrix points, Vector targets)
    : points_(std::move(points)), targets_(std::move(targets)) {
  if (points_.rows() < 1) throw InputError("dataset: need at least one point");
  if (points_.cols() < 1) throw InputError("dataset: points must have dimension >= 1");
  if (targets_.size() != points_.rows()) {
    throw InputError("dataset: " + std::to_string(points_.rows()) + " points but " +
                     std::to_string(targets_.size()) + " targets");
  }
  if (!points_.allFinite() || !targets_.allFinite()) {
    throw InputError("dataset: non-finite value");
  }
}

Dataset Dataset::subset(std::span<const Index> indices) const {
  Matrix pts(static_cast<Index>(indices.size()), dim());
  Vector ys(static_cast<Index>(indices.size()));
  for (std::size_t r = 0; r < indices.size(); ++r) {
    pts.row(static_cast<Index>(r)) = points_.row(indices[r]);
    ys[static_cast<Index>(r)] = targets_[indices[r]];
  }
  return Dataset(std::move(pts), std::move(ys));
}

MaxAffineModel::MaxAffineModel(std::span<const Hyperplane> hyperplanes) {
  if (hyperplanes.empty()) throw std::invalid_argument("max-affine model needs K >= 1");
  const Index d = hyperplanes.front().slope.size();
  slopes_.resize(static_cast<Index>(hyperplanes.size()), d);
  intercepts_.resize(static_cast<Index>(hyperplanes.size()));
  for (std::size_t k = 0; k < hyperplanes.size(); ++k) {
    require_dim(hyperplanes[k].slope.size(), d, "hyperplane slope");
    slopes_.row(static_cast<Index>(k)) = hyperplanes[k].slope.transpose();
    intercepts_[static_cast<Index>(k)] = hyperplanes[k].intercept;
  }
  if (!slopes_.allFinite() || !intercepts_.allFinite()) {
    throw std::invalid_argument("max-affine model: non-finite hyperplane");
  }
}

MaxAffineModel::MaxAffineModel(Matrix slopes, Vector intercepts)
    : slopes_(std::move(slopes)), intercepts_(std::move(intercepts)) {
  if (slopes_.rows() < 1) throw std::invalid_argument("max-affine model needs K >= 1");
  require_dim(intercepts_.size(), slopes_.rows(), "max-affine intercepts");
  if (!slopes_.allFinite() || !intercepts_.allFinite()) {
    throw std::invalid_argument("max-affine model: non-finite hyperplane");
  }
}

MaxAffineModel MaxAffineModel::constant(Index dim, double value) {
  return MaxAffineModel(Matrix::Zero(1, dim), Vector::Constant(1, value));
}

std::vector<Hyperplane> MaxAffineModel::hyperplanes() const {
  std::vector<Hyperplane> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (Index k = 0; k < size(); ++k) out.push_back(hyperplane(k));
  return out;
}

double MaxAffineModel::operator()(const Eigen::Ref<const Vector>& x) const {
  require_dim(x.size(), dim(), "max-affine eval");
  return (slopes_ * x + intercepts_).maxCoeff();
}

Matrix MaxAffineModel::affine_values(const Matrix& points) const {
  require_dim(points.cols(), dim(), "max-affine eval");
  Matrix values = slopes_ * points.transpose();
  values.colwise() += intercepts_;
  return values;
}

double eval(const MaxAffineModel& model, const Eigen::Ref<const Vector>& x) { return model(x); }

Vector eval_all(const MaxAffineModel& model, const Matrix& points) {
  return model.affine_values(points).colwise().maxCoeff().transpose();
}

double empirical_risk(const MaxAffineModel& model, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("empirical risk of an empty dataset");
  const Vector residual = eval_all(model, data.points()) - data.targets();
  return residual.squaredNorm() / static_cast<double>(data.size());
}

Partition::Partition(std::vector<Cell> cells, Index n) : cells_(std::move(cells)) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Index covered = 0;
  for (const auto& cell : cells_) {
    if (cell.empty()) throw std::invalid_argument("partition: empty cell");
    for (Index i : cell) {
      if (i < 0 || i >= n) throw std::invalid_argument("partition: index out of range");
      if (seen[static_cast<std::size_t>(i)]) {
        throw std::invalid_argument("partition: cells overlap");
      }
      seen[static_cast<std::size_t>(i)] = 1;
      ++covered;
    }
  }
  if (covered != n) throw std::invalid_argument("partition: cells do not cover the data");
}

Partition Partition::trivial(Index n) {
  Cell all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  return Partition({std::move(all)}, n);
}

std::size_t Partition::smallest_cell() const {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& c : cells_) best = std::min(best, c.size());
  return best;
}

Partition induced_partition(const MaxAffineModel& model, const Dataset& data,
                            std::vector<Index>* owners) {
  const Matrix values = model.affine_values(data.points());
  std::vector<Cell> by_plane(static_cast<std::size_t>(model.size()));
  for (Index i = 0; i < data.size(); ++i) {
    Index arg = 0;
    for (Index k = 1; k < model.size(); ++k) {
      if (values(k, i) > values(arg, i)) arg = k;
    }
    by_plane[static_cast<std::size_t>(arg)].push_back(i);
  }

  std::vector<Cell> cells;
  if (owners) owners->clear();
  for (std::size_t k = 0; k < by_plane.size(); ++k) {
    if (by_plane[k].empty()) continue;
    cells.push_back(std::move(by_plane[k]));
    if (owners) owners->push_back(static_cast<Index>(k));
  }
  return Partition(std::move(cells), data.size());
}

Hyperplane fit_cell(const Dataset& data, std::span<const Index> cell, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("ridge parameter must be positive");
  if (cell.empty()) throw std::invalid_argument("cannot fit an empty cell");
  const Index d = data.dim();
  const auto count = static_cast<double>(cell.size());

  Vector x_mean = Vector::Zero(d);
  double y_mean = 0.0;
  for (Index i : cell) {
    x_mean += data.point(i);
    y_mean += data.target(i);
  }
  x_mean /= count;
  y_mean /= count;

  // Centering the targets as well leaves the normal equations unchanged
  // (sum of centered points is zero) but makes constant targets give an
  // exactly zero slope.
  Matrix gram = beta * Matrix::Identity(d, d);
  Vector moment = Vector::Zero(d);
  for (Index i : cell) {
    const Vector delta = data.point(i) - x_mean;
    gram.selfadjointView<Eigen::Lower>().rankUpdate(delta);
    moment += delta * (data.target(i) - y_mean);
  }

  Hyperplane h;
  h.slope = gram.selfadjointView<Eigen::Lower>().llt().solve(moment);
  h.intercept = y_mean - h.slope.dot(x_mean);
  return h;
}

MaxAffineModel fit_partition(const Dataset& data, const Partition& partition, double beta) {
  if (partition.size() == 0) throw std::invalid_argument("cannot fit an empty partition");
  std::vector<Hyperplane> planes;
  planes.reserve(partition.size());
  for (const auto& cell : partition.cells()) planes.push_back(fit_cell(data, cell, beta));
  return MaxAffineModel(planes);
}

AffineMap AffineMap::identity(Index dim) {
  return {Matrix::Identity(dim, dim), Vector::Zero(dim), 1.0};
}

MaxAffineModel compose_with_affine(const MaxAffineModel& model, const AffineMap& map) {
  require_dim(model.dim(), map.output_dim(), "compose_with_affine");
  require_dim(map.offset.size(), map.input_dim(), "affine map offset");
  Matrix slopes = map.output_scale * (model.slopes() * map.matrix);
  Vector intercepts = map.output_scale * model.intercepts() - slopes * map.offset;
  return MaxAffineModel(std::move(slopes), std::move(intercepts));
}

}  // namespace cvxadp
