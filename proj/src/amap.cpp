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

#include "cvxadp/amap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cvxadp/parallel.hpp"
#include "cvxadp/rng.hpp"

namespace cvxadp {

void AmapParams::validate() const {
  if (folds < 2) throw std::invalid_argument("AMAP: folds must be >= 2");
  if (patience < 1) throw std::invalid_argument("AMAP: patience must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("AMAP: beta must be positive");
  if (min_cell_override && *min_cell_override < 1) {
    throw std::invalid_argument("AMAP: minimum cell size must be >= 1");
  }
}

Preprocessed preprocess(const Dataset& raw) {
  const Index n = raw.size();
  const Vector mean = raw.points().colwise().mean().transpose();
  const Matrix centered = raw.points().rowwise() - mean.transpose();

  const double yscale = std::max(1.0, raw.targets().cwiseAbs().maxCoeff());

  Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  if (!(top > 0.0) || top <= kRankTolerance * raw.points().norm()) {
    throw NumericError("preprocess: points are all identical, no direction to regress on");
  }

  Index kept = 0;
  while (kept < sv.size() && sv[kept] > kRankTolerance * top) ++kept;

  Matrix u = svd.matrixU().leftCols(kept);
  Matrix v = svd.matrixV().leftCols(kept);
  // Sign of each singular pair, fixed on the left vector: rotating the input
  // changes V but leaves U (hence the training points) untouched.
  for (Index j = 0; j < kept; ++j) {
    Index arg = 0;
    for (Index i = 1; i < n; ++i) {
      if (std::abs(u(i, j)) > std::abs(u(arg, j))) arg = i;
    }
    if (u(arg, j) < 0.0) {
      u.col(j) = -u.col(j);
      v.col(j) = -v.col(j);
    }
  }

  const double xscale = std::max(1.0, top);
  Matrix points = u * sv.head(kept).asDiagonal();
  points /= xscale;

  AffineMap map;
  map.matrix = v.transpose() / xscale;
  map.offset = mean;
  map.output_scale = yscale;
  return {Dataset(std::move(points), raw.targets() / yscale), std::move(map)};
}

int default_min_cell_size(Index n, Index d) {
  const int log_n = static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));
  return std::max(static_cast<int>(2 * (d + 1)), log_n);
}

int iteration_cap(Index n, Index d) {
  const double exponent = static_cast<double>(d) / static_cast<double>(d + 4);
  return static_cast<int>(std::ceil(std::pow(static_cast<double>(n), exponent)));
}

namespace {

double median_of(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

struct SplitCandidate {
  std::size_t cell = 0;
  Index coord = 0;
  double median = 0.0;
  Hyperplane le;
  Hyperplane gt;
};

}  // namespace

ImproveResult improve_step(const Dataset& data, const MaxAffineModel& model,
                           const Partition& partition, double risk, int min_cell,
                           double beta) {
  if (static_cast<Index>(partition.size()) != model.size()) {
    throw std::invalid_argument("improve_step: partition and model sizes differ");
  }
  if (min_cell < 1) throw std::invalid_argument("improve_step: minimum cell size must be >= 1");

  const Index n = data.size();
  const Index d = data.dim();
  const Matrix& x = data.points();
  const Vector& y = data.targets();
  const double inv_n = 1.0 / static_cast<double>(n);

  // Top two affine values per point, so the risk of a model differing in one
  // replaced hyperplane costs O(nd) instead of O(nKd).
  const Matrix values = model.affine_values(x);
  std::vector<double> best(static_cast<std::size_t>(n));
  std::vector<double> second(static_cast<std::size_t>(n));
  std::vector<Index> best_arg(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    double b = -std::numeric_limits<double>::infinity();
    double s = b;
    Index arg = 0;
    for (Index k = 0; k < model.size(); ++k) {
      const double v = values(k, i);
      if (v > b) {
        s = b;
        b = v;
        arg = k;
      } else if (v > s) {
        s = v;
      }
    }
    best[static_cast<std::size_t>(i)] = b;
    second[static_cast<std::size_t>(i)] = s;
    best_arg[static_cast<std::size_t>(i)] = arg;
  }

  double best_risk = risk;
  std::optional<SplitCandidate> chosen;

  for (std::size_t k = 0; k < partition.size(); ++k) {
    const Cell& cell = partition[k];
    if (cell.size() < 2 * static_cast<std::size_t>(min_cell)) continue;

    for (Index j = 0; j < d; ++j) {
      std::vector<double> coords;
      coords.reserve(cell.size());
      for (Index i : cell) coords.push_back(x(i, j));
      const double m = median_of(coords);

      // Points on the median are used by both fits.
      Cell le, gt;
      for (Index i : cell) {
        if (x(i, j) <= m) le.push_back(i);
        if (x(i, j) >= m) gt.push_back(i);
      }
      if (le.size() == cell.size() || gt.size() == cell.size()) continue;
      // The stored cells put ties on the le side; both must keep min_cell.
      const std::size_t ties = le.size() + gt.size() - cell.size();
      if (gt.size() - ties < static_cast<std::size_t>(min_cell)) continue;

      Hyperplane h_le = fit_cell(data, le, beta);
      Hyperplane h_gt = fit_cell(data, gt, beta);

      double sse = 0.0;
      for (Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double other = best_arg[ui] == static_cast<Index>(k) ? second[ui] : best[ui];
        const auto xi = x.row(i).transpose();
        const double v = std::max({other, h_le(xi), h_gt(xi)});
        const double r = v - y[i];
        sse += r * r;
      }
      const double candidate_risk = sse * inv_n;
      if (candidate_risk < best_risk) {
        best_risk = candidate_risk;
        chosen = SplitCandidate{k, j, m, std::move(h_le), std::move(h_gt)};
      }
    }
  }

  if (!chosen) return {model, partition, risk, false};

  // Split model: hyperplane k becomes (le, gt); the stored partition keeps
  // median ties on the le side only so the cells stay disjoint.
  std::vector<Hyperplane> planes = model.hyperplanes();
  planes[chosen->cell] = chosen->le;
  planes.insert(planes.begin() + static_cast<std::ptrdiff_t>(chosen->cell) + 1, chosen->gt);

  std::vector<Cell> cells = partition.cells();
  Cell le_part, gt_part;
  for (Index i : cells[chosen->cell]) {
    (x(i, chosen->coord) <= chosen->median ? le_part : gt_part).push_back(i);
  }
  cells[chosen->cell] = std::move(le_part);
  cells.insert(cells.begin() + static_cast<std::ptrdiff_t>(chosen->cell) + 1, std::move(gt_part));

  ImproveResult current{MaxAffineModel(planes), Partition(std::move(cells), n), best_risk, true};

  // Restricted LSPA: keep alternating while the refit strictly lowers the
  // risk and every induced cell still holds min_cell points. The risk is
  // strictly decreasing over finitely many partitions, so this terminates.
  for (;;) {
    Partition induced = induced_partition(current.model, data);
    if (induced.smallest_cell() < static_cast<std::size_t>(min_cell)) break;
    MaxAffineModel refit = fit_partition(data, induced, beta);
    const double refit_risk = empirical_risk(refit, data);
    if (!(refit_risk < current.risk)) break;
    current.model = std::move(refit);
    current.partition = std::move(induced);
    current.risk = refit_risk;
  }
  return current;
}

namespace {

std::vector<Index> shuffled_indices(Index n, std::uint64_t seed) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng = make_stream(seed, "amap-shuffle");
  for (std::size_t i = perm.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

TrainedEstimate constant_estimate(const Dataset& raw) {
  const double mean = raw.targets().mean();
  TrainedEstimate est;
  est.model = MaxAffineModel::constant(raw.dim(), mean);
  est.preprocess = AffineMap::identity(raw.dim());
  est.final_train_risk = (raw.targets().array() - mean).square().mean();
  est.degenerate = true;
  return est;
}

struct Fold {
  Dataset train;
  Dataset test;
  FoldState state;
};

}  // namespace

TrainedEstimate train(const Dataset& raw, const AmapParams& params,
                      const ImproveObserver& observer) {
  params.validate();
  const Index n = raw.size();
  if (n < std::max<Index>(params.folds, raw.dim() + 2)) {
    throw std::invalid_argument("AMAP: need n >= max(folds, d + 2) samples, got n = " +
                                std::to_string(n));
  }

  const std::vector<Index> perm = shuffled_indices(n, params.seed);
  const Dataset shuffled = raw.subset(perm);

  std::optional<Preprocessed> pre;
  try {
    pre = preprocess(shuffled);
  } catch (const NumericError&) {
    return constant_estimate(raw);
  }
  const Dataset& data = pre->data;
  const Index dim = data.dim();
  const int min_cell = params.min_cell_override.value_or(default_min_cell_size(n, dim));

  // Contiguous blocks of ceil(n / folds); trailing blocks that would be
  // empty are not created.
  const Index block = (n + params.folds - 1) / params.folds;
  const Index fold_count = (n + block - 1) / block;
  std::vector<Fold> folds;
  folds.reserve(static_cast<std::size_t>(fold_count));
  for (Index g = 0; g < fold_count; ++g) {
    const Index lo = g * block;
    const Index hi = std::min(n, lo + block);
    std::vector<Index> train_idx, test_idx;
    for (Index i = 0; i < n; ++i) (i >= lo && i < hi ? test_idx : train_idx).push_back(i);

    Fold f{data.subset(train_idx), data.subset(test_idx), {}};
    f.state.partition = Partition::trivial(f.train.size());
    f.state.model = fit_partition(f.train, f.state.partition, params.beta);
    f.state.train_risk = empirical_risk(f.state.model, f.train);
    f.state.test_risk = empirical_risk(f.state.model, f.test);
    folds.push_back(std::move(f));
  }

  auto cv_error = [&] {
    double sum = 0.0;
    for (const auto& f : folds) sum += f.state.test_risk;
    return sum / static_cast<double>(folds.size());
  };
  auto snapshot = [&] {
    std::vector<MaxAffineModel> models;
    for (const auto& f : folds) models.push_back(f.state.model);
    return models;
  };

  std::vector<MaxAffineModel> best_models = snapshot();
  double best_cv = cv_error();

  const int cap = iteration_cap(n, dim);
  int t_max = params.patience;
  int iterations = 0;
  std::vector<double> before(folds.size());
  for (int t = 1; t <= std::min(t_max, cap); ++t) {
    ++iterations;
    for (std::size_t g = 0; g < folds.size(); ++g) before[g] = folds[g].state.train_risk;

    parallel_for(folds.size(), [&](std::size_t g) {
      FoldState& s = folds[g].state;
      if (s.converged) return;
      ImproveResult r = improve_step(folds[g].train, s.model, s.partition, s.train_risk,
                                     min_cell, params.beta);
      if (!r.changed) {
        s.converged = true;
        return;
      }
      s.model = std::move(r.model);
      s.partition = std::move(r.partition);
      s.train_risk = r.risk;
      s.test_risk = empirical_risk(s.model, folds[g].test);
    });

    if (observer) {
      for (std::size_t g = 0; g < folds.size(); ++g) {
        observer(static_cast<int>(g), before[g], folds[g].state.train_risk);
      }
    }

    const double cv = cv_error();
    if (cv < best_cv) {
      best_cv = cv;
      best_models = snapshot();
      t_max = t + params.patience;
    }
    if (std::all_of(folds.begin(), folds.end(), [](const Fold& f) { return f.state.converged; })) {
      break;
    }
  }

  std::size_t pick = 0;
  double pick_risk = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < best_models.size(); ++g) {
    const double r = empirical_risk(best_models[g], data);
    if (r < pick_risk) {
      pick_risk = r;
      pick = g;
    }
  }

  TrainedEstimate est;
  est.model = compose_with_affine(best_models[pick], pre->map);
  est.preprocess = pre->map;
  est.final_train_risk = empirical_risk(est.model, raw);
  est.iterations = iterations;
  return est;
}

}  // namespace cvxadp
