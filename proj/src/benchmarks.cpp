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

#include "cvxadp/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace cvxadp {

// ------------------------------------------------------- truncated normal

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }
double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

// Acklam's rational approximation, polished by one Halley step.
double normal_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double lo = 0.02425;
  double x;
  if (p < lo) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - lo) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

// Standardized draw from N(0,1) restricted to [a, b] with a >= 0, by the
// inverse survival function.
double right_tail_draw(double a, double b, Rng& rng) {
  const double qa = normal_sf(a);
  const double qb = normal_sf(b);
  if (qa < 1e-300) {
    // Far tail: the conditional law is close to a + Exp(a).
    return std::min(b, a - std::log(uniform01_open_low(rng)) / a);
  }
  const double target = qa - uniform01(rng) * (qa - qb);
  return std::clamp(-normal_quantile(target), a, b);
}

}  // namespace

void TruncatedNormalSpec::validate() const {
  if (!std::isfinite(mean) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw InputError("truncated normal: non-finite parameter");
  }
  if (!(std > 0.0) || !std::isfinite(std)) throw InputError("truncated normal: std must be > 0");
  if (!(lower < upper)) throw InputError("truncated normal: need lower < upper");
}

double TruncatedNormalSpec::expectation() const {
  validate();
  double a = (lower - mean) / std;
  double b = (upper - mean) / std;
  // Work on the side of the axis where the tail probabilities are accurate.
  const bool mirror = a > 0.0;
  if (mirror) {
    std::swap(a, b);
    a = -a;
    b = -b;
  }
  const double mass = normal_cdf(b) - normal_cdf(a);
  if (!(mass > 1e-300)) return mirror ? lower : upper;
  const double shift = (normal_pdf(a) - normal_pdf(b)) / mass;
  return std::clamp(mean + (mirror ? -shift : shift) * std, lower, upper);
}

double sample_truncated_normal(const TruncatedNormalSpec& spec, Rng& rng) {
  spec.validate();
  const double a = (spec.lower - spec.mean) / spec.std;
  const double b = (spec.upper - spec.mean) / spec.std;
  const double mass =
      a > 0.0 ? normal_sf(a) - normal_sf(b) : normal_cdf(b) - normal_cdf(a);

  double z;
  if (mass >= 0.01) {
    do {
      z = standard_normal(rng);
    } while (z < a || z > b);
  } else if (a >= 0.0) {
    z = right_tail_draw(a, b, rng);
  } else if (b <= 0.0) {
    z = -right_tail_draw(-b, -a, rng);
  } else {
    // Narrow interval around the mode.
    const double pa = normal_cdf(a);
    z = std::clamp(normal_quantile(pa + uniform01(rng) * (normal_cdf(b) - pa)), a, b);
  }
  return std::clamp(spec.mean + spec.std * z, spec.lower, spec.upper);
}

// ---------------------------------------------------------------- energy

namespace {

int hour_of(int tau) { return (tau - 1) % 24; }

}  // namespace

EnergyConfig EnergyConfig::defaults(int horizon) {
  if (horizon < 1) throw InputError("energy: horizon must be >= 1");
  EnergyConfig cfg;
  cfg.horizon = horizon;
  for (int t = 1; t <= horizon; ++t) {
    const int h = hour_of(t);
    const double p = (h >= 23 || h < 7) ? 10.0 : 20.0;
    cfg.retail.push_back(p);
    cfg.wholesale.push_back(0.6 * p);
  }
  for (int tau = 1; tau <= horizon + 1; ++tau) {
    const double h = hour_of(tau);
    const double d = std::max(0.0, 5.0 + 3.0 * std::sin(2.0 * std::numbers::pi * (h - 12.0) / 24.0));
    const double e = 10.0 * std::max(0.0, std::sin(std::numbers::pi * (h - 6.0) / 12.0));
    cfg.demand.push_back({d, 1.5, 0.0, 15.0});
    cfg.energy.push_back({e, 1.0, 0.0, 12.0});
  }
  return cfg;
}

void EnergyConfig::validate() const {
  if (horizon < 1) throw InputError("energy: horizon must be >= 1");
  const auto T = static_cast<std::size_t>(horizon);
  if (retail.size() != T || wholesale.size() != T) {
    throw InputError("energy: need one retail and one wholesale price per stage");
  }
  if (demand.size() != T + 1 || energy.size() != T + 1) {
    throw InputError("energy: need demand and energy distributions for hours 1..T+1");
  }
  if (!(s_max > 0.0) || !(r_c > 0.0) || !(r_d > 0.0)) {
    throw InputError("energy: s_max, r_c and r_d must be positive");
  }
  if (!(s0 >= 0.0 && s0 <= s_max)) throw InputError("energy: s0 must lie in [0, s_max]");
  if (heuristic_final_stages < 0) throw InputError("energy: heuristic_final_stages must be >= 0");
  for (std::size_t t = 0; t < T; ++t) {
    if (!(wholesale[t] >= 0.0) || !(retail[t] >= wholesale[t])) {
      throw InputError("energy: need p_t >= w_t >= 0 (stage " + std::to_string(t + 1) + ")");
    }
  }
  for (const auto& s : demand) {
    s.validate();
    if (s.lower < 0.0) throw InputError("energy: demand support must be nonnegative");
  }
  for (const auto& s : energy) {
    s.validate();
    if (s.lower < 0.0) throw InputError("energy: energy support must be nonnegative");
  }
}

EnergyConfig EnergyConfig::truncated(int h) const {
  if (h < 1 || h > horizon) throw InputError("energy: truncation outside 1..T");
  EnergyConfig out = *this;
  out.horizon = h;
  out.retail.resize(static_cast<std::size_t>(h));
  out.wholesale.resize(static_cast<std::size_t>(h));
  out.demand.resize(static_cast<std::size_t>(h) + 1);
  out.energy.resize(static_cast<std::size_t>(h) + 1);
  return out;
}

namespace {

using namespace energy;

// Storage change caused by the flows of x.
Vector net_flow_row() {
  Vector g = Vector::Zero(kDim);
  g[kES] = 1.0;
  g[kSD] = -1.0;
  g[kSG] = -1.0;
  g[kGS] = 1.0;
  return g;
}

Matrix energy_recourse() {
  const Vector g = net_flow_row();
  Matrix q = Matrix::Zero(kRows, kDim);
  q(0, kS) = 1.0;   // s - s_prev - net_prev <= 0
  q(1, kS) = -1.0;  // and >= 0
  for (Index f = 1; f < kDim; ++f) q(1 + f, f) = -1.0;
  Vector level = g;
  level[kS] = 1.0;  // s + net
  q.row(8) = -level.transpose();
  q.row(9) = level.transpose();
  q(10, kES) = q(10, kGS) = 1.0;
  q(11, kSD) = q(11, kSG) = 1.0;
  q(12, kES) = q(12, kED) = q(12, kEG) = 1.0;
  q(13, kED) = q(13, kSD) = 1.0;
  return q;
}

Matrix energy_coupling() {
  Vector level = net_flow_row();
  level[kS] = 1.0;
  Matrix w = Matrix::Zero(kRows, kDim);
  w.row(0) = -level.transpose();
  w.row(1) = level.transpose();
  return w;
}

Vector energy_rhs(const EnergyConfig& cfg, const Vector& z) {
  require_dim(z.size(), 2, "energy disturbance");
  Vector c = Vector::Zero(kRows);
  c[9] = cfg.s_max;
  c[10] = cfg.r_c;
  c[11] = cfg.r_d;
  c[12] = z[0];
  c[13] = z[1];
  return c;
}

double storage_after(const Vector& x_prev) {
  return x_prev[kS] + x_prev[kES] - x_prev[kSD] - x_prev[kSG] + x_prev[kGS];
}

Vector with_storage(double s, const std::array<double, 6>& flows) {
  Vector x(kDim);
  x[kS] = s;
  for (Index f = 0; f < 6; ++f) x[f + 1] = flows[static_cast<std::size_t>(f)];
  return x;
}

}  // namespace

SPProblem build_energy_problem(const EnergyConfig& config) {
  config.validate();
  SPProblem p;
  p.name = "energy";
  p.horizon = config.horizon;
  p.decision_dims.assign(static_cast<std::size_t>(config.horizon) + 1, kDim);
  p.initial_x = Vector::Zero(kDim);
  p.initial_x[kS] = config.s0;
  p.initial_z = Vector(2);
  p.initial_z << config.energy.front().expectation(), config.demand.front().expectation();

  const Matrix q = energy_recourse();
  const Matrix w = energy_coupling();
  p.stage_cost = [cfg = config](int t, const Vector& x, const Vector&) {
    const auto i = static_cast<std::size_t>(t - 1);
    return cfg.retail.at(i) * (x[kGS] - x[kED] - x[kSD]) - cfg.wholesale.at(i) * (x[kEG] + x[kSG]);
  };
  p.recourse = [q](int) { return q; };
  p.coupling = [w](int, const Vector&) { return w; };
  p.rhs = [cfg = config](int, const Vector& z) { return energy_rhs(cfg, z); };
  p.sample_disturbance = [cfg = config](int t, Rng& rng) {
    const auto i = static_cast<std::size_t>(t);  // Z_t carries hour t + 1
    Vector z(2);
    z[0] = sample_truncated_normal(cfg.energy.at(i), rng);
    z[1] = sample_truncated_normal(cfg.demand.at(i), rng);
    return z;
  };
  return p;
}

std::array<double, 6> energy_no_storage_policy(double energy, double demand) {
  const double ed = std::max(0.0, std::min(energy, demand));
  const double eg = std::max(0.0, energy - ed);
  return {0.0, ed, eg, 0.0, 0.0, 0.0};
}

std::array<double, 6> energy_heuristic_policy(double s, double energy, double demand, int t,
                                              const EnergyConfig& config) {
  const double ed = std::max(0.0, std::min(energy, demand));
  const double eg = std::max(0.0, energy - ed);
  const double residual = std::max(0.0, demand - ed);
  const double stock = std::max(0.0, s);
  double sd = 0.0, sg = 0.0, gs = 0.0;

  const double peak = *std::max_element(config.retail.begin(), config.retail.end());
  const bool night = config.retail.at(static_cast<std::size_t>(t - 1)) < peak;
  if (t > config.horizon - config.heuristic_final_stages) {
    sd = std::min({config.r_d, stock, residual});
    sg = std::max(0.0, std::min(config.r_d - sd, stock - sd));
  } else if (night) {
    gs = std::max(0.0, std::min(config.r_c, config.s_max - stock));
  } else {
    sd = std::min({config.r_d, stock, residual});
  }
  return {0.0, ed, eg, sd, sg, gs};
}

Policy energy_no_storage(const EnergyConfig& config) {
  config.validate();
  return [](int, const Vector& x_prev, const Vector& z_prev, const Polytope&) {
    return with_storage(storage_after(x_prev), energy_no_storage_policy(z_prev[0], z_prev[1]));
  };
}

Policy energy_heuristic(const EnergyConfig& config) {
  config.validate();
  return [cfg = config](int t, const Vector& x_prev, const Vector& z_prev, const Polytope&) {
    const double s = storage_after(x_prev);
    return with_storage(s, energy_heuristic_policy(s, z_prev[0], z_prev[1], t, cfg));
  };
}

// ---------------------------------------------------------------- brewery

BreweryConfig BreweryConfig::defaults(int horizon) {
  if (horizon < 1) throw InputError("brewery: horizon must be >= 1");
  BreweryConfig cfg;
  cfg.horizon = horizon;
  const double period = static_cast<double>(horizon);
  for (int tau = 1; tau <= horizon + 1; ++tau) {
    const double phase = 2.0 * std::numbers::pi * tau / period;
    const double ale = 4.0 + 2.0 * std::sin(phase + std::numbers::pi / 2.0);
    const double lager = 6.0 + 3.0 * std::sin(phase);
    cfg.demand.push_back({TruncatedNormalSpec{ale, 1.5, 0.1, 12.0},
                          TruncatedNormalSpec{lager, 1.5, 0.1, 12.0}});
  }
  return cfg;
}

void BreweryConfig::validate() const {
  if (horizon < 1) throw InputError("brewery: horizon must be >= 1");
  if (demand.size() != static_cast<std::size_t>(horizon) + 1) {
    throw InputError("brewery: need demand distributions for tau = 1..T+1");
  }
  auto nonneg = [](const auto& v, const char* what) {
    for (double e : v) {
      if (!(e >= 0.0) || !std::isfinite(e)) throw InputError(std::string("brewery: ") + what + " must be finite and >= 0");
    }
  };
  nonneg(storage_cost, "storage costs");
  nonneg(purchase_cost, "purchase costs");
  nonneg(sale_price, "sale prices");
  nonneg(ale_recipe, "ale recipe");
  nonneg(lager_recipe, "lager recipe");
  for (double k : capacity) {
    if (!(k >= 0.0)) throw InputError("brewery: capacities must be >= 0");
  }
  for (const auto& pair : demand) {
    for (const auto& s : pair) {
      s.validate();
      if (s.lower < 0.0) throw InputError("brewery: demand support must be nonnegative");
    }
  }
}

BreweryConfig BreweryConfig::truncated(int h) const {
  if (h < 1 || h > horizon) throw InputError("brewery: truncation outside 1..T");
  BreweryConfig out = *this;
  out.horizon = h;
  out.demand.resize(static_cast<std::size_t>(h) + 1);
  return out;
}

Matrix BreweryConfig::fermentation() const {
  Matrix f = Matrix::Zero(brewery::kStates, brewery::kDim);
  for (Index i = 0; i < 3; ++i) f(i, i) = 1.0;  // ingredients stay
  f(4, 3) = f(4, 4) = 1.0;                      // young ale matures, stock stays
  f(6, 5) = 1.0;                                // lager ages
  f(7, 6) = 1.0;
  f(8, 7) = f(8, 8) = 1.0;
  return f;
}

Matrix BreweryConfig::brewing() const {
  Matrix b = Matrix::Zero(brewery::kStates, 2);
  for (Index i = 0; i < 3; ++i) {
    b(i, 0) = -ale_recipe[static_cast<std::size_t>(i)];
    b(i, 1) = -lager_recipe[static_cast<std::size_t>(i)];
  }
  b(3, 0) = 1.0;
  b(5, 1) = 1.0;
  return b;
}

Matrix BreweryConfig::loading() const {
  Matrix r = Matrix::Zero(brewery::kStates, 3);
  for (Index i = 0; i < 3; ++i) r(i, i) = 1.0;
  return r;
}

Matrix BreweryConfig::selling() const {
  Matrix s = Matrix::Zero(brewery::kStates, 2);
  s(4, 0) = 1.0;
  s(8, 1) = 1.0;
  return s;
}

Vector BreweryConfig::cost_vector() const {
  Vector c(brewery::kDim);
  for (Index i = 0; i < 9; ++i) c[i] = storage_cost[static_cast<std::size_t>(i)];
  for (Index i = 0; i < 5; ++i) c[9 + i] = purchase_cost[static_cast<std::size_t>(i)];
  c[14] = -sale_price[0];
  c[15] = -sale_price[1];
  return c;
}

namespace {

struct BreweryTemplate {
  Matrix q;
  Matrix w;
  Vector c;           // right-hand side with zero demand
  Index demand_row;   // rows demand_row, demand_row + 1 carry u_s <= D
};

BreweryTemplate brewery_template(const BreweryConfig& cfg) {
  using namespace brewery;
  const Matrix F = cfg.fermentation();
  const Matrix B = cfg.brewing();
  const Matrix R = cfg.loading();
  const Matrix S = cfg.selling();

  // state - R u_r - B u_b + S u_s as a row block over x.
  Matrix dyn = Matrix::Zero(kStates, brewery::kDim);
  dyn.leftCols(kStates).setIdentity();
  dyn.middleCols(kOrders, 3) = -R;
  dyn.middleCols(kBrew, 2) = -B;
  dyn.middleCols(kSales, 2) = S;

  std::vector<Index> finite;
  for (Index i = 0; i < kStates; ++i) {
    if (std::isfinite(cfg.capacity[static_cast<std::size_t>(i)])) finite.push_back(i);
  }
  const Index rows = 2 * kStates + 7 + 2 + kStates + static_cast<Index>(finite.size()) + kStates +
                     static_cast<Index>(finite.size());
  BreweryTemplate t{Matrix::Zero(rows, brewery::kDim), Matrix::Zero(rows, brewery::kDim), Vector::Zero(rows), 0};

  Index r = 0;
  t.q.middleRows(r, kStates) = dyn;
  t.w.middleRows(r, kStates) = -F;
  r += kStates;
  t.q.middleRows(r, kStates) = -dyn;
  t.w.middleRows(r, kStates) = F;
  r += kStates;
  for (Index a = 0; a < 7; ++a) t.q(r++, kOrders + a) = -1.0;
  t.demand_row = r;
  t.q(r++, kSales) = 1.0;
  t.q(r++, kSales + 1) = 1.0;
  // Brewing and sales use only stock carried over: F x + B u_b - S u_s >= 0.
  t.q.block(r, kBrew, kStates, 2) = -B;
  t.q.block(r, kSales, kStates, 2) = S;
  t.w.middleRows(r, kStates) = -F;
  r += kStates;
  for (Index i : finite) {
    t.q.block(r, kOrders, 1, 3) = R.row(i);
    t.q.block(r, kBrew, 1, 2) = B.row(i);
    t.w.row(r) = F.row(i);
    t.c[r] = cfg.capacity[static_cast<std::size_t>(i)];
    ++r;
  }
  // 0 <= state <= k holds on every true transition. Spelling it out keeps
  // the relaxed reachable hull inside the states that have a successor.
  for (Index i = 0; i < kStates; ++i) t.q(r++, i) = -1.0;
  for (Index i : finite) {
    t.q(r, i) = 1.0;
    t.c[r++] = cfg.capacity[static_cast<std::size_t>(i)];
  }
  return t;
}

Vector brewery_rhs(const BreweryTemplate& tpl, const Vector& z) {
  require_dim(z.size(), 2, "brewery disturbance");
  Vector c = tpl.c;
  c[tpl.demand_row] = z[0];
  c[tpl.demand_row + 1] = z[1];
  return c;
}

}  // namespace

SPProblem build_brewery_problem(const BreweryConfig& config) {
  config.validate();
  const auto tpl = std::make_shared<const BreweryTemplate>(brewery_template(config));
  SPProblem p;
  p.name = "brewery";
  p.horizon = config.horizon;
  p.decision_dims.assign(static_cast<std::size_t>(config.horizon) + 1, brewery::kDim);
  p.initial_x = Vector::Zero(brewery::kDim);
  p.initial_z = Vector::Zero(2);
  p.stage_cost = [cost = config.cost_vector()](int, const Vector& x, const Vector&) {
    return cost.dot(x);
  };
  p.recourse = [tpl](int) { return tpl->q; };
  p.coupling = [tpl](int, const Vector&) { return tpl->w; };
  p.rhs = [tpl](int, const Vector& z) { return brewery_rhs(*tpl, z); };
  p.sample_disturbance = [cfg = config](int t, Rng& rng) {
    const auto& pair = cfg.demand.at(static_cast<std::size_t>(t));  // Z_t is demand at t + 1
    Vector z(2);
    z[0] = sample_truncated_normal(pair[0], rng);
    z[1] = sample_truncated_normal(pair[1], rng);
    return z;
  };
  return p;
}

DeterministicPlan brewery_deterministic_baseline(const BreweryConfig& config) {
  config.validate();
  Matrix expected(config.horizon, 2);
  for (int t = 1; t <= config.horizon; ++t) {
    const auto& pair = config.demand[static_cast<std::size_t>(t)];
    expected(t - 1, 0) = pair[0].expectation();
    expected(t - 1, 1) = pair[1].expectation();
  }
  return brewery_deterministic_baseline(config, expected);
}

DeterministicPlan brewery_deterministic_baseline(const BreweryConfig& config,
                                                 const Matrix& expected_demand) {
  config.validate();
  const Index T = config.horizon;
  require_dim(expected_demand.rows(), T, "expected demand rows");
  require_dim(expected_demand.cols(), 2, "expected demand columns");
  const BreweryTemplate tpl = brewery_template(config);
  const Index d = brewery::kDim;
  const Index r = tpl.q.rows();

  // Stage t's block reads Q x_t + W x_{t-1} <= c(z_{t-1}); x_0 = 0, z_0 = 0.
  LinearProgram lp;
  lp.A = Matrix::Zero(r * T, d * T);
  lp.b = Vector::Zero(r * T);
  lp.objective = Vector::Zero(d * T);
  const Vector cost = config.cost_vector();
  for (Index t = 0; t < T; ++t) {
    lp.A.block(t * r, t * d, r, d) = tpl.q;
    if (t > 0) lp.A.block(t * r, (t - 1) * d, r, d) = tpl.w;
    const Vector z = t > 0 ? Vector(expected_demand.row(t - 1).transpose()) : Vector::Zero(2);
    lp.b.segment(t * r, r) = brewery_rhs(tpl, z);
    lp.objective.segment(t * d, d) = cost;
  }
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::optimal) {
    throw NumericError("brewery deterministic plan: LP " + to_string(res.status));
  }
  DeterministicPlan plan;
  plan.decisions.resize(T, d);
  for (Index t = 0; t < T; ++t) plan.decisions.row(t) = res.solution->segment(t * d, d).transpose();
  plan.revenue = -*res.value;
  return plan;
}

Policy replay_plan(const Matrix& decisions) {
  return [decisions](int t, const Vector&, const Vector&, const Polytope& region) -> Vector {
    if (t < 1 || t > decisions.rows()) throw std::out_of_range("replay_plan: stage outside the plan");
    const Vector target = decisions.row(t - 1).transpose();
    if (region.contains(target, 1e-7)) return target;

    // min sum e  s.t.  Q x <= c,  x - e <= target,  -x - e <= -target.
    const Index d = region.dim();
    const Index r = region.rows();
    LinearProgram lp;
    lp.objective = Vector::Zero(2 * d);
    lp.objective.tail(d).setOnes();
    lp.A = Matrix::Zero(r + 2 * d, 2 * d);
    lp.b = Vector::Zero(r + 2 * d);
    lp.A.topLeftCorner(r, d) = region.Q();
    lp.b.head(r) = region.c();
    const Matrix eye = Matrix::Identity(d, d);
    lp.A.block(r, 0, d, d) = eye;
    lp.A.block(r, d, d, d) = -eye;
    lp.b.segment(r, d) = target;
    lp.A.block(r + d, 0, d, d) = -eye;
    lp.A.block(r + d, d, d, d) = -eye;
    lp.b.segment(r + d, d) = -target;
    const LpResult res = solve_lp(lp);
    if (res.status != LpStatus::optimal) {
      throw NumericError("plan replay: projection LP " + to_string(res.status));
    }
    return res.solution->head(d);
  };
}

}  // namespace cvxadp
