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
 * @file benchmarks.hpp
 * @brief The energy storage and beer brewery problems with their
 * reference policies.
 *
 * Both problems write equality dynamics as paired inequalities, so every
 * stage set is {x : Q x + W x_prev <= c(z_prev)}. Price and demand curves
 * are config values; the shipped defaults are smooth daily / seasonal
 * shapes, not measured data.
 */

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "cvxadp/fadp.hpp"

namespace cvxadp {

struct TruncatedNormalSpec {
  double mean = 0.0;
  double std = 1.0;
  double lower = -1.0;
  double upper = 1.0;

  void validate() const;
  double expectation() const;
};

/// Normal(mean, std^2) conditioned on [lower, upper]. Rejection while the
/// acceptance rate is at least 1%, inverse CDF otherwise.
double sample_truncated_normal(const TruncatedNormalSpec& spec, Rng& rng);

// ---------------------------------------------------------------- energy

/// x = [s, f_es, f_ed, f_eg, f_sd, f_sg, f_gs]; z_t = [E_{t+1}, D_{t+1}].
namespace energy {
inline constexpr Index kS = 0, kES = 1, kED = 2, kEG = 3, kSD = 4, kSG = 5, kGS = 6;
inline constexpr Index kDim = 7;
inline constexpr Index kRows = 14;
}  // namespace energy

struct EnergyConfig {
  int horizon = 48;
  double s_max = 20.0;
  double r_c = 4.0;
  double r_d = 10.0;
  double s0 = 0.0;
  std::vector<double> retail;     // p_t, t = 1..T
  std::vector<double> wholesale;  // w_t, t = 1..T
  std::vector<TruncatedNormalSpec> demand;  // D_tau, tau = 1..T+1
  std::vector<TruncatedNormalSpec> energy;  // E_tau, tau = 1..T+1
  int heuristic_final_stages = 3;

  static EnergyConfig defaults(int horizon = 48);
  void validate() const;
  /// First `horizon` stages of this config.
  EnergyConfig truncated(int horizon) const;
};

SPProblem build_energy_problem(const EnergyConfig& config);

/// Flows [f_es, f_ed, f_eg, f_sd, f_sg, f_gs] of the policy that is optimal
/// without storage.
std::array<double, 6> energy_no_storage_policy(double energy, double demand);

/// Flows of the hand-written storage rule at stage t with storage level s.
std::array<double, 6> energy_heuristic_policy(double s, double energy, double demand, int t,
                                              const EnergyConfig& config);

Policy energy_no_storage(const EnergyConfig& config);
Policy energy_heuristic(const EnergyConfig& config);

// ---------------------------------------------------------------- brewery

/// x = [9 states, u_r (3), u_b (2), u_s (2)]; z_t = [D_ale, D_lager] at t+1.
namespace brewery {
inline constexpr Index kStates = 9;
inline constexpr Index kDim = 16;
inline constexpr Index kOrders = 9, kBrew = 12, kSales = 14;
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();
}  // namespace brewery

struct BreweryConfig {
  int horizon = 24;
  std::array<double, 9> storage_cost{1, 0.2, 0.2, 1, 2, 1, 1, 1, 2};
  std::array<double, 5> purchase_cost{20, 10, 5, 1, 1};
  std::array<double, 2> sale_price{90, 50};
  std::array<double, 3> ale_recipe{1, 1, 1};
  std::array<double, 3> lager_recipe{0.5, 0.9, 0.8};
  std::array<double, 9> capacity{10, 10, 10, 10, brewery::kUnbounded, 10,
                                 brewery::kUnbounded, brewery::kUnbounded,
                                 brewery::kUnbounded};
  std::vector<std::array<TruncatedNormalSpec, 2>> demand;  // [ale, lager] at tau = 1..T+1

  static BreweryConfig defaults(int horizon = 24);
  void validate() const;
  BreweryConfig truncated(int horizon) const;

  Matrix fermentation() const;  // F, 9 x 16
  Matrix brewing() const;       // B, 9 x 2
  Matrix loading() const;       // R, 9 x 3
  Matrix selling() const;       // S, 9 x 2
  Vector cost_vector() const;   // [h, c, -r]
};

SPProblem build_brewery_problem(const BreweryConfig& config);

struct DeterministicPlan {
  Matrix decisions;  // T x 16, row t-1 is x_t
  double revenue = 0.0;
};

/// Optimal open-loop plan when every demand is replaced by its expectation,
/// from one LP over all stages. `expected_demand` row t-1 replaces Z_t.
DeterministicPlan brewery_deterministic_baseline(const BreweryConfig& config);
DeterministicPlan brewery_deterministic_baseline(const BreweryConfig& config,
                                                 const Matrix& expected_demand);

/// Replays a plan: the planned decision when it is feasible, otherwise its
/// nearest feasible point in the L1 norm.
Policy replay_plan(const Matrix& decisions);

}  // namespace cvxadp
