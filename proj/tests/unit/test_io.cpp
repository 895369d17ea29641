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

#include <filesystem>
#include <fstream>

#include "cvxadp/io.hpp"
#include "oracles.hpp"

using namespace cvxadp;

TEST_CASE("model round trip is exact") {
  Rng rng(1);
  const MaxAffineModel m = oracle::random_model(rng, 5, 3);
  const Json j = m;
  CHECK(Json::parse(dump_json(j)).get<MaxAffineModel>() == m);
  CHECK(j["dim"] == 3);
  CHECK(j["hyperplanes"].size() == 5);
}

TEST_CASE("stack round trip is exact") {
  Rng rng(2);
  CostToGoStack s;
  for (int t = 0; t < 3; ++t) {
    TrainedEstimate e;
    e.model = oracle::random_model(rng, 2 + t, 2);
    e.preprocess.matrix = oracle::gaussian_matrix(rng, 2, 2);
    e.preprocess.offset = Vector::Random(2);
    e.preprocess.output_scale = 3.0;
    e.final_train_risk = 0.1 * t;
    s.estimates.push_back(e);
  }
  const CostToGoStack back = Json::parse(dump_json(Json(s))).get<CostToGoStack>();
  REQUIRE(back.horizon() == 3);
  for (int t = 1; t <= 3; ++t) {
    CHECK(back.at(t).model == s.at(t).model);
    CHECK(back.at(t).preprocess.matrix == s.at(t).preprocess.matrix);
    CHECK(back.at(t).preprocess.offset == s.at(t).preprocess.offset);
    CHECK(back.at(t).preprocess.output_scale == s.at(t).preprocess.output_scale);
  }
}

TEST_CASE("polytope JSON") {
  const Polytope p = Json::parse(R"({"Q": [[1, 0], [0, 1], [-1, -1]], "c": [1, 1, 0]})").get<Polytope>();
  CHECK(p.rows() == 3);
  CHECK(p.contains(Vector::Constant(2, 0.25)));
  CHECK_THROWS(Json::parse(R"({"Q": [[1, 0], [0]], "c": [1, 1]})").get<Polytope>());
  CHECK_THROWS(Json::parse(R"({"Q": [[1, 0]], "c": [1, 1]})").get<Polytope>());
}

TEST_CASE("config round trips") {
  const EnergyConfig e = EnergyConfig::defaults(5);
  const EnergyConfig e2 = energy_config_from_json(Json(e));
  CHECK(Json(e2) == Json(e));
  const BreweryConfig b = BreweryConfig::defaults(4);
  const Json bj = b;
  CHECK(bj["capacity"][4].is_null());
  CHECK(Json(brewery_config_from_json(bj)) == bj);
}

TEST_CASE("config overrides and rejections") {
  const EnergyConfig e = energy_config_from_json(Json::parse(R"({"horizon": 6, "s_max": 8})"));
  CHECK(e.horizon == 6);
  CHECK(e.s_max == 8.0);
  CHECK(e.retail.size() == 6);
  CHECK_THROWS_AS(energy_config_from_json(Json::parse(R"({"smax": 8})")), InputError);
  CHECK_THROWS_AS(energy_config_from_json(Json::parse(R"({"problem": "brewery"})")), InputError);
  CHECK_THROWS_AS(brewery_config_from_json(Json::parse(R"({"horizon": 0})")), InputError);
  const AmapParams a = amap_params_from_json(Json::parse(R"({"folds": 4})"));
  CHECK(a.folds == 4);
  CHECK(a.patience == AmapParams{}.patience);
  CHECK_THROWS_AS(amap_params_from_json(Json::parse(R"({"fold": 4})")), InputError);
}

TEST_CASE("CSV datasets") {
  const Dataset d = parse_csv_dataset("x,y,target\n1,2,3\n4, 5 ,6.5\n", true);
  CHECK(d.size() == 2);
  CHECK(d.dim() == 2);
  CHECK(d.target(1) == 6.5);
  CHECK(d.point(1)[1] == 5.0);
  CHECK_THROWS_AS(parse_csv_dataset("1,2\n3\n", false), InputError);
  CHECK_THROWS_AS(parse_csv_dataset("", false), InputError);
  CHECK_THROWS_AS(parse_csv_dataset("a,b\n", true), InputError);
  CHECK_THROWS_AS(parse_csv_dataset("1,x\n", false), InputError);
  CHECK_THROWS_AS(read_csv_dataset("/nonexistent/file.csv", false), InputError);
}

TEST_CASE("CSV output round trips doubles") {
  Matrix m(2, 2);
  m << 0.1, 1.0 / 3.0, -2e-300, 12345.678;
  const std::string text = format_csv(m);
  const Dataset d = parse_csv_dataset(text, false);
  CHECK(d.point(0)[0] == 0.1);
  CHECK(d.target(0) == 1.0 / 3.0);
  CHECK(d.point(1)[0] == -2e-300);
}

TEST_CASE("atomic writes replace the file") {
  const auto dir = std::filesystem::temp_directory_path() / "cvxadp_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::string s;
  in >> s;
  CHECK(s == "second");
  std::filesystem::remove_all(dir);
}
