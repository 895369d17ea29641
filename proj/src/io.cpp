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

#include "cvxadp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

namespace cvxadp {

namespace {

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + ": expected a number");
  return j.get<double>();
}

Vector vector_from(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = number(j[i], what);
  return v;
}

Matrix matrix_from(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": expected a nonempty array of rows");
  const Vector first = vector_from(j[0], what);
  Matrix m(static_cast<Index>(j.size()), first.size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = vector_from(j[r], what);
    if (row.size() != first.size()) throw InputError(std::string(what) + ": ragged rows");
    m.row(static_cast<Index>(r)) = row.transpose();
  }
  return m;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InputError(std::string(what) + ": unknown key '" + key + "'");
  }
}

// Infinite capacities are written as null.
Json capacity_json(double k) { return std::isfinite(k) ? Json(k) : Json(nullptr); }
double capacity_from(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : number(j, "capacity");
}

template <std::size_t N>
std::array<double, N> fixed_array(const Json& j, const char* what) {
  const Vector v = vector_from(j, what);
  if (v.size() != static_cast<Index>(N)) {
    throw InputError(std::string(what) + ": expected " + std::to_string(N) + " entries");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = v[static_cast<Index>(i)];
  return out;
}

std::vector<double> list_from(const Json& j, const char* what) {
  const Vector v = vector_from(j, what);
  return {v.data(), v.data() + v.size()};
}

std::vector<TruncatedNormalSpec> specs_from(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  std::vector<TruncatedNormalSpec> out;
  for (const auto& e : j) out.push_back(e.get<TruncatedNormalSpec>());
  return out;
}

}  // namespace

void to_json(Json& j, const Hyperplane& h) {
  j = Json{{"slope", vector_json(h.slope)}, {"intercept", h.intercept}};
}

void to_json(Json& j, const MaxAffineModel& m) {
  Json planes = Json::array();
  for (Index k = 0; k < m.size(); ++k) planes.push_back(m.hyperplane(k));
  j = Json{{"dim", m.dim()}, {"hyperplanes", planes}};
}

void from_json(const Json& j, MaxAffineModel& m) {
  const Json& planes = field(j, "hyperplanes");
  if (!planes.is_array() || planes.empty()) throw InputError("model: need at least one hyperplane");
  std::vector<Hyperplane> hs;
  for (const auto& p : planes) {
    hs.push_back({vector_from(field(p, "slope"), "slope"), number(field(p, "intercept"), "intercept")});
  }
  try {
    m = MaxAffineModel(hs);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("model: ") + e.what());
  }
  if (j.contains("dim") && number(j.at("dim"), "dim") != static_cast<double>(m.dim())) {
    throw InputError("model: 'dim' disagrees with the slopes");
  }
}

void to_json(Json& j, const AffineMap& a) {
  j = Json{{"matrix", matrix_json(a.matrix)},
           {"offset", vector_json(a.offset)},
           {"output_scale", a.output_scale}};
}

void from_json(const Json& j, AffineMap& a) {
  a.matrix = matrix_from(field(j, "matrix"), "matrix");
  a.offset = vector_from(field(j, "offset"), "offset");
  a.output_scale = number(field(j, "output_scale"), "output_scale");
  if (a.offset.size() != a.matrix.cols()) throw InputError("affine map: offset/matrix mismatch");
  if (!(a.output_scale >= 1.0)) throw InputError("affine map: output_scale must be >= 1");
}

void to_json(Json& j, const TrainedEstimate& e) {
  j = Json{{"model", e.model},
           {"preprocess", e.preprocess},
           {"final_train_risk", e.final_train_risk},
           {"degenerate", e.degenerate},
           {"iterations", e.iterations}};
}

void from_json(const Json& j, TrainedEstimate& e) {
  e.model = field(j, "model").get<MaxAffineModel>();
  if (j.contains("preprocess")) e.preprocess = j.at("preprocess").get<AffineMap>();
  else e.preprocess = AffineMap::identity(e.model.dim());
  e.final_train_risk = j.value("final_train_risk", 0.0);
  e.degenerate = j.value("degenerate", false);
  e.iterations = j.value("iterations", 0);
  if (e.preprocess.input_dim() != e.model.dim()) {
    throw InputError("estimate: preprocess input dimension differs from the model");
  }
}

void to_json(Json& j, const CostToGoStack& s) {
  Json stages = Json::array();
  for (const auto& e : s.estimates) stages.push_back(e);
  j = Json{{"horizon", s.horizon()}, {"stages", stages}};
}

void from_json(const Json& j, CostToGoStack& s) {
  const Json& stages = field(j, "stages");
  if (!stages.is_array()) throw InputError("stack: 'stages' must be an array");
  s.estimates.clear();
  for (const auto& e : stages) s.estimates.push_back(e.get<TrainedEstimate>());
  if (j.contains("horizon") && number(j.at("horizon"), "horizon") != static_cast<double>(s.horizon())) {
    throw InputError("stack: 'horizon' disagrees with the number of stages");
  }
}

void to_json(Json& j, const Polytope& p) {
  j = Json{{"Q", matrix_json(p.Q())}, {"c", vector_json(p.c())}};
}

void from_json(const Json& j, Polytope& p) {
  Matrix q = matrix_from(field(j, "Q"), "Q");
  Vector c = vector_from(field(j, "c"), "c");
  if (c.size() != q.rows()) throw InputError("polytope: Q and c have different row counts");
  try {
    p = Polytope(std::move(q), std::move(c));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("polytope: ") + e.what());
  }
}

void to_json(Json& j, const AmapParams& p) {
  j = Json{{"folds", p.folds},
           {"patience", p.patience},
           {"beta", p.beta},
           {"min_cell_override", p.min_cell_override ? Json(*p.min_cell_override) : Json(nullptr)},
           {"seed", p.seed}};
}

AmapParams amap_params_from_json(const Json& j) {
  reject_unknown(j, {"folds", "patience", "beta", "min_cell_override", "seed"}, "amap params");
  AmapParams p;
  p.folds = j.value("folds", p.folds);
  p.patience = j.value("patience", p.patience);
  p.beta = j.value("beta", p.beta);
  if (j.contains("min_cell_override") && !j.at("min_cell_override").is_null()) {
    p.min_cell_override = j.at("min_cell_override").get<int>();
  }
  p.seed = j.value("seed", p.seed);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return p;
}

void to_json(Json& j, const TruncatedNormalSpec& s) {
  j = Json{{"mean", s.mean}, {"std", s.std}, {"lower", s.lower}, {"upper", s.upper}};
}

void from_json(const Json& j, TruncatedNormalSpec& s) {
  reject_unknown(j, {"mean", "std", "lower", "upper"}, "truncated normal");
  s.mean = number(field(j, "mean"), "mean");
  s.std = number(field(j, "std"), "std");
  s.lower = number(field(j, "lower"), "lower");
  s.upper = number(field(j, "upper"), "upper");
  s.validate();
}

void to_json(Json& j, const EnergyConfig& c) {
  j = Json{{"problem", "energy"},
           {"horizon", c.horizon},
           {"s_max", c.s_max},
           {"r_c", c.r_c},
           {"r_d", c.r_d},
           {"s0", c.s0},
           {"retail", c.retail},
           {"wholesale", c.wholesale},
           {"demand", c.demand},
           {"energy", c.energy},
           {"heuristic_final_stages", c.heuristic_final_stages}};
}

EnergyConfig energy_config_from_json(const Json& j) {
  reject_unknown(j,
                 {"problem", "horizon", "s_max", "r_c", "r_d", "s0", "retail", "wholesale",
                  "demand", "energy", "heuristic_final_stages"},
                 "energy config");
  if (j.contains("problem") && j.at("problem") != "energy") {
    throw InputError("config is for problem " + j.at("problem").dump() + ", not energy");
  }
  try {
    EnergyConfig c = EnergyConfig::defaults(j.value("horizon", 48));
    if (j.contains("s_max")) c.s_max = number(j.at("s_max"), "s_max");
    if (j.contains("r_c")) c.r_c = number(j.at("r_c"), "r_c");
    if (j.contains("r_d")) c.r_d = number(j.at("r_d"), "r_d");
    if (j.contains("s0")) c.s0 = number(j.at("s0"), "s0");
    if (j.contains("retail")) c.retail = list_from(j.at("retail"), "retail");
    if (j.contains("wholesale")) c.wholesale = list_from(j.at("wholesale"), "wholesale");
    if (j.contains("demand")) c.demand = specs_from(j.at("demand"), "demand");
    if (j.contains("energy")) c.energy = specs_from(j.at("energy"), "energy");
    c.heuristic_final_stages = j.value("heuristic_final_stages", c.heuristic_final_stages);
    c.validate();
    return c;
  } catch (const Json::exception& e) {
    throw InputError(std::string("energy config: ") + e.what());
  }
}

void to_json(Json& j, const BreweryConfig& c) {
  Json capacity = Json::array();
  for (double k : c.capacity) capacity.push_back(capacity_json(k));
  Json demand = Json::array();
  for (const auto& pair : c.demand) demand.push_back(Json{{"ale", pair[0]}, {"lager", pair[1]}});
  j = Json{{"problem", "brewery"},
           {"horizon", c.horizon},
           {"storage_cost", c.storage_cost},
           {"purchase_cost", c.purchase_cost},
           {"sale_price", c.sale_price},
           {"ale_recipe", c.ale_recipe},
           {"lager_recipe", c.lager_recipe},
           {"capacity", capacity},
           {"demand", demand}};
}

BreweryConfig brewery_config_from_json(const Json& j) {
  reject_unknown(j,
                 {"problem", "horizon", "storage_cost", "purchase_cost", "sale_price",
                  "ale_recipe", "lager_recipe", "capacity", "demand"},
                 "brewery config");
  if (j.contains("problem") && j.at("problem") != "brewery") {
    throw InputError("config is for problem " + j.at("problem").dump() + ", not brewery");
  }
  try {
    BreweryConfig c = BreweryConfig::defaults(j.value("horizon", 24));
    if (j.contains("storage_cost")) c.storage_cost = fixed_array<9>(j.at("storage_cost"), "storage_cost");
    if (j.contains("purchase_cost")) c.purchase_cost = fixed_array<5>(j.at("purchase_cost"), "purchase_cost");
    if (j.contains("sale_price")) c.sale_price = fixed_array<2>(j.at("sale_price"), "sale_price");
    if (j.contains("ale_recipe")) c.ale_recipe = fixed_array<3>(j.at("ale_recipe"), "ale_recipe");
    if (j.contains("lager_recipe")) c.lager_recipe = fixed_array<3>(j.at("lager_recipe"), "lager_recipe");
    if (j.contains("capacity")) {
      const Json& k = j.at("capacity");
      if (!k.is_array() || k.size() != 9) throw InputError("capacity: expected 9 entries");
      for (std::size_t i = 0; i < 9; ++i) c.capacity[i] = capacity_from(k[i]);
    }
    if (j.contains("demand")) {
      const Json& d = j.at("demand");
      if (!d.is_array()) throw InputError("demand: expected an array");
      c.demand.clear();
      for (const auto& e : d) {
        reject_unknown(e, {"ale", "lager"}, "demand entry");
        c.demand.push_back({field(e, "ale").get<TruncatedNormalSpec>(),
                            field(e, "lager").get<TruncatedNormalSpec>()});
      }
    }
    c.validate();
    return c;
  } catch (const Json::exception& e) {
    throw InputError(std::string("brewery config: ") + e.what());
  }
}

// ------------------------------------------------------------------ CSV

Dataset parse_csv_dataset(const std::string& text, bool header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  bool skipped_header = !header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t end = line.find(',', start);
      std::string cell = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      cell = first == std::string::npos ? "" : cell.substr(first, last - first + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw InputError("CSV line " + std::to_string(line_no) + ": not a finite number: '" + cell + "'");
      }
      row.push_back(v);
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("CSV line " + std::to_string(line_no) + ": expected " +
                       std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("CSV: no data rows");
  if (rows.front().size() < 2) throw InputError("CSV: need at least one feature and one target column");

  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(rows.front().size()) - 1;
  Matrix x(n, d);
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (Index k = 0; k < d; ++k) x(i, k) = r[static_cast<std::size_t>(k)];
    y[i] = r.back();
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset read_csv_dataset(const std::filesystem::path& path, bool header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_dataset(buf.str(), header);
}

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_csv(const Matrix& rows, const std::string& header) {
  std::string out;
  if (!header.empty()) out += header + "\n";
  for (Index r = 0; r < rows.rows(); ++r) {
    for (Index c = 0; c < rows.cols(); ++c) {
      if (c) out += ',';
      out += format_double(rows(r, c));
    }
    out += '\n';
  }
  return out;
}

// ----------------------------------------------------------------- files

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp =
      path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace cvxadp
