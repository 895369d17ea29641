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
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "cvxadp/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cvxadp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cvxadp::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("cvxadp_cli_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& f) const { return (path_ / f).string(); }

 private:
  fs::path path_;
};

void write(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("regress fits a plane with one hyperplane") {
  TempDir dir("regress");
  std::string csv;
  for (int i = 0; i < 40; ++i) {
    const double x = i * 0.25, y = (i % 7) * 0.5;
    csv += std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(2 * x - y + 1) + "\n";
  }
  write(dir / "d.csv", csv);
  const Result r = run_cli({"regress", "--data", dir / "d.csv", "--out", dir / "m.json"});
  REQUIRE(r.code == 0);
  const cvxadp::Json j = cvxadp::read_json_file(dir / "m.json");
  CHECK(j["model"]["hyperplanes"].size() == 1);
  const cvxadp::Json manifest = cvxadp::read_json_file(dir / "m.json.manifest.json");
  CHECK(manifest["command"] == "regress");
  CHECK(manifest["outputs"]["m.json"].get<std::string>().size() == 64);

  SUBCASE("existing outputs need --force") {
    CHECK(run_cli({"regress", "--data", dir / "d.csv", "--out", dir / "m.json"}).code == 1);
    CHECK(run_cli({"regress", "--data", dir / "d.csv", "--out", dir / "m.json", "--force"}).code == 0);
  }
  SUBCASE("same seed, same bytes") {
    REQUIRE(run_cli({"regress", "--data", dir / "d.csv", "--out", dir / "m2.json", "--threads", "3"}).code == 0);
    CHECK(slurp(dir / "m.json") == slurp(dir / "m2.json"));
  }
}

TEST_CASE("input errors exit with 2") {
  TempDir dir("errors");
  write(dir / "empty.csv", "");
  CHECK(run_cli({"regress", "--data", dir / "empty.csv", "--out", dir / "m.json"}).code == 2);
  CHECK_FALSE(fs::exists(dir / "m.json"));
  write(dir / "bad.json", "{\"Q\": [[1]], \"c\": [1, 2]}");
  CHECK(run_cli({"sample", "--data", dir / "bad.json", "--out", dir / "s.csv"}).code == 2);
  CHECK(run_cli({"plan", "--problem", "energy", "--config", dir / "missing.json", "--out", dir / "p.json"}).code == 2);
}

TEST_CASE("usage errors exit with 1") {
  TempDir dir("usage");
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"plan", "--problem", "factory", "--out", dir / "p.json"}).code == 1);
  CHECK(run_cli({"baseline", "--problem", "energy", "--which", "deterministic", "--out", dir / "b.csv"}).code == 1);
  CHECK(run_cli({"regress", "--data", dir / "d.csv"}).code == 1);
  CHECK(run_cli({"--version"}).code == 0);
}

TEST_CASE("sample writes a CSV of points") {
  TempDir dir("sample");
  write(dir / "square.json", R"({"Q": [[1, 0], [0, 1], [-1, 0], [0, -1]], "c": [1, 1, 0, 0]})");
  const Result r = run_cli({"sample", "--data", dir / "square.json", "--n", "50", "--out", dir / "s.csv"});
  REQUIRE(r.code == 0);
  const cvxadp::Dataset d = cvxadp::parse_csv_dataset(slurp(dir / "s.csv"), true);
  CHECK(d.size() == 50);
}

TEST_CASE("plan, evaluate and baselines on short horizons") {
  TempDir dir("plan");
  REQUIRE(run_cli({"plan", "--problem", "energy", "--horizon", "3", "--n", "30", "--m", "3",
                   "--out", dir / "stack.json"}).code == 0);
  CHECK(cvxadp::read_json_file(dir / "stack.json")["stages"].size() == 3);

  const Result e = run_cli({"evaluate", "--problem", "energy", "--horizon", "3", "--stack",
                            dir / "stack.json", "--episodes", "1", "--out", dir / "rev.csv"});
  REQUIRE(e.code == 0);
  const std::string table = slurp(dir / "rev.csv");
  CHECK(table.rfind("episode,revenue\n0,", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);

  CHECK(run_cli({"evaluate", "--problem", "energy", "--horizon", "4", "--stack", dir / "stack.json",
                 "--episodes", "1", "--out", dir / "bad.csv"}).code == 2);

  const Result b = run_cli({"baseline", "--problem", "energy", "--horizon", "3", "--which", "nostorage",
                            "--episodes", "5", "--columnar", "--out", dir / "ns.txt"});
  REQUIRE(b.code == 0);
  CHECK(slurp(dir / "ns.txt").rfind("# episode revenue\n", 0) == 0);

  CHECK(run_cli({"baseline", "--problem", "brewery", "--horizon", "3", "--which", "deterministic",
                 "--episodes", "2", "--out", dir / "det.csv"}).code == 0);
}

TEST_CASE("config-dump respects the config directory") {
  TempDir dir("configs");
  write(dir / "energy.json", R"({"horizon": 5})");
  ::setenv("CVXADP_CONFIG_DIR", (dir / "").c_str(), 1);
  const Result r = run_cli({"config-dump", "--problem", "energy", "--out", dir / "resolved.json"});
  ::unsetenv("CVXADP_CONFIG_DIR");
  REQUIRE(r.code == 0);
  CHECK(cvxadp::read_json_file(dir / "resolved.json")["horizon"] == 5);
}
