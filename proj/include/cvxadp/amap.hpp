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
 * @file amap.hpp
 * @brief Adaptive max-affine partitioning: an incremental convex regression
 * trainer.
 *
 * Models start as a single least squares hyperplane and grow by at most one
 * hyperplane per iteration. Every iteration tries a median split of each
 * large enough cell along each coordinate, keeps the best one, and then
 * refines the result with partition/refit alternations for as long as they
 * keep lowering the training risk. The model size is selected by k-fold
 * cross-validation with a patience counter.
 *
 * Training runs on SVD-whitened data so the coordinate-wise splits do not
 * depend on the orientation of the input; the returned model is mapped back
 * to raw coordinates.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <tuple>

#include "cvxadp/maxaffine.hpp"

namespace cvxadp {

struct AmapParams {
  int folds = 10;
  int patience = 5;
  double beta = kDefaultRidge;
  std::optional<int> min_cell_override;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FoldState {
  MaxAffineModel model;
  Partition partition;
  double train_risk = 0.0;
  double test_risk = 0.0;
  bool converged = false;
};

struct TrainedEstimate {
  MaxAffineModel model;   // raw coordinates
  AffineMap preprocess;   // raw -> training coordinates
  double final_train_risk = 0.0;  // in raw target units
  bool degenerate = false;        // constant fallback was used
  int iterations = 0;

  double operator()(const Eigen::Ref<const Vector>& x) const { return model(x); }
};

/// Relative cutoff below which singular values count as zero.
inline constexpr double kRankTolerance = 1e-10;

struct Preprocessed {
  Dataset data;
  AffineMap map;
};

/// Centers the points, scales targets by max{1, |y|_inf}, and rotates onto
/// the thin-SVD basis with numerically zero directions dropped, scaled by
/// max{1, S_11}. Each output coordinate is sign-normalized so its
/// largest-magnitude entry is positive. Throws NumericError when every
/// singular value vanishes (all points equal).
Preprocessed preprocess(const Dataset& raw);

/// max{2(d+1), ceil(log2 n)}
int default_min_cell_size(Index n, Index d);

/// max-iteration cap ceil(n^{d/(d+4)})
int iteration_cap(Index n, Index d);

struct ImproveResult {
  MaxAffineModel model;
  Partition partition;
  double risk = 0.0;
  bool changed = false;
};

/// One model improvement step: best median split, then restricted LSPA.
/// Never increases the risk; returns the inputs unchanged when no split
/// improves the risk.
ImproveResult improve_step(const Dataset& data, const MaxAffineModel& model,
                           const Partition& partition, double risk, int min_cell,
                           double beta = kDefaultRidge);

/// Observer called after every improve_step inside train():
/// (fold, risk_before, risk_after).
using ImproveObserver = std::function<void(int, double, double)>;

/// Cross-validated AMAP. Requires n >= max(folds, d + 2).
TrainedEstimate train(const Dataset& raw, const AmapParams& params,
                      const ImproveObserver& observer = {});

}  // namespace cvxadp
