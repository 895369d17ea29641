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

#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "cvxadp/amap.hpp"
#include "cvxadp/benchmarks.hpp"
#include "cvxadp/fadp.hpp"
#include "cvxadp/io.hpp"
#include "cvxadp/parallel.hpp"
#include "cvxadp/sampler.hpp"

namespace cvxadp::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string data;
  std::string config;
  std::string amap;
  std::string stack;
  std::string out;
  std::string problem;
  std::string which;
  bool header = false;
  bool force = false;
  bool columnar = false;
  long n = 25;
  long m = 10;
  int episodes = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::optional<int> horizon;
};

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

// Collects the outputs of one command and writes them, followed by the
// manifest, once the command has succeeded.
class Run {
 public:
  Run(std::string command, const Options& opt)
      : command_(std::move(command)), opt_(opt), start_(std::chrono::steady_clock::now()) {}

  Json& config() { return config_; }

  void add_output(const fs::path& path, std::string content) {
    if (!opt_.force && fs::exists(path)) {
      throw UsageError(path.string() + " exists; pass --force to overwrite");
    }
    outputs_.emplace_back(path, std::move(content));
  }

  void commit() {
    const fs::path manifest_path = opt_.out + ".manifest.json";
    if (!opt_.force && fs::exists(manifest_path)) {
      throw UsageError(manifest_path.string() + " exists; pass --force to overwrite");
    }
    Json digests = Json::object();
    for (const auto& [path, content] : outputs_) {
      write_file_atomic(path, content);
      digests[path.filename().string()] = sha256_hex(content);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const Json manifest{{"command", command_},
                        {"config", config_},
                        {"seed", opt_.seed},
                        {"version", kVersion},
                        {"duration_seconds", seconds},
                        {"outputs", digests}};
    write_file_atomic(manifest_path, dump_json(manifest));
  }

 private:
  std::string command_;
  const Options& opt_;
  std::chrono::steady_clock::time_point start_;
  Json config_ = Json::object();
  std::vector<std::pair<fs::path, std::string>> outputs_;
};

std::optional<fs::path> config_dir() {
  const char* dir = std::getenv("CVXADP_CONFIG_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return fs::path(dir);
}

// Explicit path, else the same name under CVXADP_CONFIG_DIR; without
// --config, <problem>.json under CVXADP_CONFIG_DIR when present.
std::optional<fs::path> locate_config(const std::string& given, const std::string& problem) {
  const auto dir = config_dir();
  if (!given.empty()) {
    if (fs::exists(given)) return fs::path(given);
    if (dir && fs::exists(*dir / given)) return *dir / given;
    throw InputError("config file not found: " + given);
  }
  if (dir && fs::exists(*dir / (problem + ".json"))) return *dir / (problem + ".json");
  return std::nullopt;
}

struct Setup {
  std::string name;
  Json config;
  SPProblem problem;
  std::optional<EnergyConfig> energy;
  std::optional<BreweryConfig> brewery;
};

Setup load_problem(const Options& opt) {
  Setup s;
  s.name = opt.problem;
  if (s.name != "energy" && s.name != "brewery") {
    throw UsageError("--problem must be 'energy' or 'brewery', got '" + s.name + "'");
  }
  const auto path = locate_config(opt.config, s.name);
  const Json raw = path ? read_json_file(*path) : Json::object();
  if (s.name == "energy") {
    EnergyConfig c = energy_config_from_json(raw);
    if (opt.horizon) c = c.truncated(*opt.horizon);
    s.problem = build_energy_problem(c);
    s.config = c;
    s.energy = std::move(c);
  } else {
    BreweryConfig c = brewery_config_from_json(raw);
    if (opt.horizon) c = c.truncated(*opt.horizon);
    s.problem = build_brewery_problem(c);
    s.config = c;
    s.brewery = std::move(c);
  }
  return s;
}

AmapParams load_amap(const std::string& path, std::uint64_t seed) {
  AmapParams p = path.empty() ? AmapParams{} : amap_params_from_json(read_json_file(path));
  p.seed = seed;
  return p;
}

std::string revenue_table(const EvaluationReport& r, bool columnar) {
  std::string out = columnar ? "# episode revenue\n" : "episode,revenue\n";
  const char sep = columnar ? ' ' : ',';
  for (std::size_t e = 0; e < r.episode_revenues.size(); ++e) {
    out += std::to_string(e) + sep + format_double(r.episode_revenues[e]) + "\n";
  }
  if (columnar) {
    out += "# mean " + format_double(r.mean) + " std " + format_double(r.std) + "\n";
  } else {
    out += "mean," + format_double(r.mean) + "\n";
    out += "std," + format_double(r.std) + "\n";
  }
  return out;
}

void report_revenue(std::ostream& out, const EvaluationReport& r) {
  out << "episodes " << r.episodes << "  mean revenue " << r.mean << "  std " << r.std
      << "  std error " << r.standard_error() << "  max violation " << r.max_violation << "\n";
}

void require_out(const Options& opt) {
  if (opt.out.empty()) throw UsageError("--out is required");
}

// ---------------------------------------------------------------- commands

void cmd_regress(const Options& opt, std::ostream& out) {
  require_out(opt);
  if (opt.data.empty()) throw UsageError("--data is required");
  Run run("regress", opt);
  const Dataset data = read_csv_dataset(opt.data, opt.header);
  const AmapParams params = load_amap(opt.config, opt.seed);
  run.config() = Json{{"data", opt.data}, {"header", opt.header}, {"amap", params}};

  const TrainedEstimate est = train(data, params);
  run.add_output(opt.out, dump_json(Json(est)));
  run.commit();
  out << "K " << est.model.size() << "  risk " << format_double(est.final_train_risk)
      << (est.degenerate ? "  (degenerate input: constant model)" : "") << "\n";
}

void cmd_sample(const Options& opt, std::ostream& out) {
  require_out(opt);
  if (opt.data.empty()) throw UsageError("--data (polytope JSON) is required");
  if (opt.n < 1) throw UsageError("--n must be >= 1");
  Run run("sample", opt);
  const Polytope region = read_json_file(opt.data).get<Polytope>();
  HitAndRunConfig cfg;
  cfg.seed = opt.seed;
  run.config() = Json{{"data", opt.data}, {"n", opt.n}, {"chains", cfg.chains},
                      {"border_points_per_start", cfg.border_points_per_start}};

  const PolytopeSample sample = sample_polytope(region, opt.n, cfg);
  std::string header;
  for (Index k = 0; k < region.dim(); ++k) header += (k ? ",x" : "x") + std::to_string(k);
  run.add_output(opt.out, format_csv(sample.points, header));
  run.commit();
  out << "points " << opt.n << "  affine dimension " << sample.affine_dim
      << (sample.reduced ? "  (lower-dimensional region)" : "") << "\n";
}

void cmd_plan(const Options& opt, std::ostream& out) {
  require_out(opt);
  if (opt.n < 1 || opt.m < 1) throw UsageError("--n and --m must be >= 1");
  Run run("plan", opt);
  const Setup s = load_problem(opt);
  const AmapParams params = load_amap(opt.amap, opt.seed);
  run.config() = Json{{"problem", s.name}, {"problem_config", s.config}, {"amap", params},
                      {"n", opt.n}, {"m", opt.m}};

  const FadpResult res = run_fadp(s.problem, opt.n, opt.m, params, opt.seed);
  run.add_output(opt.out, dump_json(Json(res.stack)));
  run.commit();
  out << "stages " << res.stack.horizon() << "  hyperplanes";
  for (const auto& e : res.stack.estimates) out << ' ' << e.model.size();
  out << "\n";
}

void cmd_evaluate(const Options& opt, std::ostream& out) {
  require_out(opt);
  if (opt.stack.empty()) throw UsageError("--stack is required");
  if (opt.episodes < 1) throw UsageError("--episodes must be >= 1");
  Run run("evaluate", opt);
  const Setup s = load_problem(opt);
  const CostToGoStack stack = read_json_file(opt.stack).get<CostToGoStack>();
  run.config() = Json{{"problem", s.name}, {"problem_config", s.config}, {"stack", opt.stack},
                      {"stack_sha256", sha256_hex(dump_json(Json(stack)))},
                      {"episodes", opt.episodes}, {"columnar", opt.columnar}};

  const EvaluationReport r = evaluate_policy(s.problem, stack, opt.episodes, opt.seed);
  run.add_output(opt.out, revenue_table(r, opt.columnar));
  run.commit();
  report_revenue(out, r);
}

void cmd_baseline(const Options& opt, std::ostream& out) {
  require_out(opt);
  if (opt.episodes < 1) throw UsageError("--episodes must be >= 1");
  Run run("baseline", opt);
  const Setup s = load_problem(opt);
  run.config() = Json{{"problem", s.name}, {"problem_config", s.config}, {"which", opt.which},
                      {"episodes", opt.episodes}, {"columnar", opt.columnar}};

  Policy policy;
  if (s.energy && opt.which == "nostorage") {
    policy = energy_no_storage(*s.energy);
  } else if (s.energy && opt.which == "heuristic") {
    policy = energy_heuristic(*s.energy);
  } else if (s.brewery && opt.which == "deterministic") {
    const DeterministicPlan plan = brewery_deterministic_baseline(*s.brewery);
    out << "deterministic plan revenue " << plan.revenue << "\n";
    policy = replay_plan(plan.decisions);
  } else {
    throw UsageError("baseline '" + opt.which + "' is not defined for problem '" + s.name +
                     "' (energy: heuristic, nostorage; brewery: deterministic)");
  }
  const EvaluationReport r = evaluate_policy(s.problem, policy, opt.episodes, opt.seed);
  run.add_output(opt.out, revenue_table(r, opt.columnar));
  run.commit();
  report_revenue(out, r);
}

void cmd_config_dump(const Options& opt, std::ostream& out) {
  require_out(opt);
  Run run("config-dump", opt);
  const Setup s = load_problem(opt);
  run.config() = Json{{"problem", s.name}};
  run.add_output(opt.out, dump_json(s.config));
  run.commit();
  out << "wrote " << opt.out << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Convex stochastic programming with max-affine cost-to-go estimates", "cvxadp"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "Master random seed");
    sub->add_option("--threads", opt.threads, "Worker threads (0: all cores); results do not depend on it")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", opt.out, "Output file");
    sub->add_flag("--force", opt.force, "Overwrite existing outputs");
  };
  auto problem_opts = [&](CLI::App* sub) {
    sub->add_option("--problem", opt.problem, "energy or brewery")->required();
    sub->add_option("--config", opt.config, "Problem config JSON (default: built-in defaults)");
    sub->add_option("--horizon", opt.horizon, "Keep only the first T stages of the config");
  };

  CLI::App* regress = app.add_subcommand("regress", "Fit a max-affine estimate to a CSV dataset");
  regress->add_option("--data", opt.data, "CSV: feature columns then the target");
  regress->add_flag("--header", opt.header, "The CSV starts with a header row");
  regress->add_option("--config", opt.config, "AMAP parameters JSON");
  common(regress);

  CLI::App* sample = app.add_subcommand("sample", "Hit-and-run sample of a polytope {Q, c}");
  sample->add_option("--data", opt.data, "Polytope JSON");
  sample->add_option("--n", opt.n, "Number of points");
  common(sample);

  CLI::App* plan = app.add_subcommand("plan", "Learn cost-to-go estimates with fADP");
  problem_opts(plan);
  plan->add_option("--n", opt.n, "Decisions sampled per stage");
  plan->add_option("--m", opt.m, "Disturbances per decision");
  plan->add_option("--amap", opt.amap, "AMAP parameters JSON");
  common(plan);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate the greedy policy of a stack");
  problem_opts(evaluate);
  evaluate->add_option("--stack", opt.stack, "Cost-to-go stack JSON from 'plan'");
  evaluate->add_option("--episodes", opt.episodes, "Evaluation episodes");
  evaluate->add_flag("--columnar", opt.columnar, "Whitespace-delimited output for plotting");
  common(evaluate);

  CLI::App* baseline = app.add_subcommand("baseline", "Evaluate a reference policy");
  problem_opts(baseline);
  baseline->add_option("--which", opt.which, "heuristic | nostorage | deterministic")->required();
  baseline->add_option("--episodes", opt.episodes, "Evaluation episodes");
  baseline->add_flag("--columnar", opt.columnar, "Whitespace-delimited output for plotting");
  common(baseline);

  CLI::App* dump = app.add_subcommand("config-dump", "Write the resolved problem config");
  problem_opts(dump);
  common(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg_out, msg_err;
    const int code = app.exit(e, msg_out, msg_err);
    out << msg_out.str();
    err << msg_err.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    set_worker_count(static_cast<unsigned>(opt.threads));
    if (regress->parsed()) cmd_regress(opt, out);
    else if (sample->parsed()) cmd_sample(opt, out);
    else if (plan->parsed()) cmd_plan(opt, out);
    else if (evaluate->parsed()) cmd_evaluate(opt, out);
    else if (baseline->parsed()) cmd_baseline(opt, out);
    else if (dump->parsed()) cmd_config_dump(opt, out);
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const DimensionError& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const Json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::out_of_range& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace cvxadp::cli
