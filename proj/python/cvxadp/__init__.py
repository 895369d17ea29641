# Copyright 2026 The cvxadp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Max-affine regression and approximate dynamic programming for convex
multistage stochastic programs."""

from ._core import (
    CostToGoStack,
    DimensionError,
    InputError,
    MaxAffineModel,
    NumericError,
    TrainedEstimate,
    __version__,
    baseline,
    chebyshev_center,
    evaluate,
    minimize_max_affine,
    plan,
    sample_polytope,
    set_worker_count,
    solve_lp,
    train,
    worker_count,
)

__all__ = [
    "CostToGoStack",
    "DimensionError",
    "InputError",
    "MaxAffineModel",
    "NumericError",
    "TrainedEstimate",
    "__version__",
    "baseline",
    "chebyshev_center",
    "evaluate",
    "minimize_max_affine",
    "plan",
    "sample_polytope",
    "set_worker_count",
    "solve_lp",
    "train",
    "worker_count",
]
