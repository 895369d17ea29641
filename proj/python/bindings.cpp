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


#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvxadp/amap.hpp"
#include "cvxadp/benchmarks.hpp"
#include "cvxadp/fadp.hpp"
#include "cvxadp/io.hpp"
#include "cvxadp/lp.hpp"
#include "cvxadp/parallel.hpp"
#include "cvxadp/sampler.hpp"

namespace py = pybind11;
using namespace cvxadp;

namespace {

Vector predict(const MaxAffineModel& m, const Matrix& points) {
  require_dim(points.cols(), m.dim(), "points");
  Vector out(points.rows());
  for (Index i = 0; i < points.rows(); ++i) out[i] = m(points.row(i).transpose());
  return out;
}

SPProblem make_problem(const std::string& name, int horizon) {
  if (name == "energy") return build_energy_problem(EnergyConfig::defaults(48).truncated(horizon));
  if (name == "brewery") return build_brewery_problem(BreweryConfig::defaults(24).truncated(horizon));
  throw InputError("problem must be 'energy' or 'brewery', got '" + name + "'");
}

py::dict report(const EvaluationReport& r) {
  py::dict d;
  d["revenues"] = r.episode_revenues;
  d["mean"] = r.mean;
  d["std"] = r.std;
  d["standard_error"] = r.standard_error();
  d["max_violation"] = r.max_violation;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Max-affine regression, polytope sampling and approximate dynamic programming";
  m.attr("__version__") = kVersion;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  m.def("set_worker_count", &set_worker_count, py::arg("workers"));
  m.def("worker_count", &worker_count);

  py::class_<MaxAffineModel>(m, "MaxAffineModel")
      .def(py::init<Matrix, Vector>(), py::arg("slopes"), py::arg("intercepts"))
      .def_property_readonly("slopes", &MaxAffineModel::slopes)
      .def_property_readonly("intercepts", &MaxAffineModel::intercepts)
      .def_property_readonly("size", &MaxAffineModel::size)
      .def_property_readonly("dim", &MaxAffineModel::dim)
      .def("__call__", [](const MaxAffineModel& self, const Vector& x) { return self(x); })
      .def("predict", &predict, py::arg("points"))
      .def("risk", [](const MaxAffineModel& self, const Matrix& x, const Vector& y) {
        return empirical_risk(self, Dataset(x, y));
      });

  py::class_<TrainedEstimate>(m, "TrainedEstimate")
      .def_readonly("model", &TrainedEstimate::model)
      .def_readonly("final_train_risk", &TrainedEstimate::final_train_risk)
      .def_readonly("degenerate", &TrainedEstimate::degenerate)
      .def_readonly("iterations", &TrainedEstimate::iterations)
      .def("__call__", [](const TrainedEstimate& self, const Vector& x) { return self(x); })
      .def("predict", [](const TrainedEstimate& self, const Matrix& x) { return predict(self.model, x); });

  m.def(
      "train",
      [](const Matrix& x, const Vector& y, int folds, int patience, double beta,
         std::optional<int> min_cell, std::uint64_t seed) {
        AmapParams p;
        p.folds = folds;
        p.patience = patience;
        p.beta = beta;
        p.min_cell_override = min_cell;
        p.seed = seed;
        py::gil_scoped_release release;
        return train(Dataset(x, y), p);
      },
      py::arg("x"), py::arg("y"), py::arg("folds") = AmapParams{}.folds,
      py::arg("patience") = AmapParams{}.patience, py::arg("beta") = AmapParams{}.beta,
      py::arg("min_cell") = py::none(), py::arg("seed") = 0,
      "Fit a max-affine estimate by adaptive partitioning with cross-validation.");

  m.def(
      "solve_lp",
      [](const Vector& objective, const Matrix& a, const Vector& b) {
        const LpResult r = solve_lp(LinearProgram{objective, a, b});
        py::dict d;
        d["status"] = to_string(r.status);
        d["x"] = r.solution ? py::cast(*r.solution) : py::none();
        d["value"] = r.value ? py::cast(*r.value) : py::none();
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("objective"), py::arg("A"), py::arg("b"), "minimize objective . x subject to A x <= b.");

  m.def(
      "minimize_max_affine",
      [](const MaxAffineModel& model, const Matrix& q, const Vector& c) {
        const MaxAffineMinimum r = minimize_max_affine(model, Polytope(q, c));
        return py::make_tuple(r.x, r.value);
      },
      py::arg("model"), py::arg("Q"), py::arg("c"));

  m.def(
      "chebyshev_center",
      [](const Matrix& q, const Vector& c) {
        const ChebyshevBall b = chebyshev_center(Polytope(q, c));
        return py::make_tuple(b.center, b.radius);
      },
      py::arg("Q"), py::arg("c"));

  m.def(
      "sample_polytope",
      [](const Matrix& q, const Vector& c, Index count, std::uint64_t seed, Index chains) {
        HitAndRunConfig cfg;
        cfg.seed = seed;
        cfg.chains = chains;
        py::gil_scoped_release release;
        return sample_polytope(Polytope(q, c), count, cfg).points;
      },
      py::arg("Q"), py::arg("c"), py::arg("count"), py::arg("seed") = 0,
      py::arg("chains") = HitAndRunConfig{}.chains, "Hit-and-run points, one per row.");

  py::class_<CostToGoStack>(m, "CostToGoStack")
      .def_property_readonly("horizon", &CostToGoStack::horizon)
      .def("__getitem__", [](const CostToGoStack& s, int t) { return s.at(t); }, py::arg("t"))
      .def("to_json", [](const CostToGoStack& s) { return dump_json(Json(s)); })
      .def_static("from_json", [](const std::string& text) {
        try {
          return Json::parse(text).get<CostToGoStack>();
        } catch (const Json::exception& e) {
          throw InputError(e.what());
        }
      });

  m.def(
      "plan",
      [](const std::string& problem, int horizon, Index n, Index m_dist, std::uint64_t seed) {
        const SPProblem p = make_problem(problem, horizon);
        AmapParams amap;
        amap.seed = seed;
        py::gil_scoped_release release;
        return run_fadp(p, n, m_dist, amap, seed).stack;
      },
      py::arg("problem"), py::arg("horizon"), py::arg("n") = 25, py::arg("m") = 10, py::arg("seed") = 1,
      "Learn cost-to-go estimates for a built-in problem with its default config.");

  m.def(
      "evaluate",
      [](const std::string& problem, const CostToGoStack& stack, int episodes, std::uint64_t seed) {
        const SPProblem p = make_problem(problem, stack.horizon());
        EvaluationReport r;
        {
          py::gil_scoped_release release;
          r = evaluate_policy(p, stack, episodes, seed);
        }
        return report(r);
      },
      py::arg("problem"), py::arg("stack"), py::arg("episodes") = 200, py::arg("seed") = 1);

  m.def(
      "baseline",
      [](const std::string& problem, const std::string& which, int horizon, int episodes,
         std::uint64_t seed) {
        const SPProblem p = make_problem(problem, horizon);
        Policy policy;
        if (problem == "energy" && which == "nostorage") {
          policy = energy_no_storage(EnergyConfig::defaults(48).truncated(horizon));
        } else if (problem == "energy" && which == "heuristic") {
          policy = energy_heuristic(EnergyConfig::defaults(48).truncated(horizon));
        } else if (problem == "brewery" && which == "deterministic") {
          policy = replay_plan(
              brewery_deterministic_baseline(BreweryConfig::defaults(24).truncated(horizon)).decisions);
        } else {
          throw InputError("no baseline '" + which + "' for problem '" + problem + "'");
        }
        EvaluationReport r;
        {
          py::gil_scoped_release release;
          r = evaluate_policy(p, policy, episodes, seed);
        }
        return report(r);
      },
      py::arg("problem"), py::arg("which"), py::arg("horizon"), py::arg("episodes") = 200,
      py::arg("seed") = 1);
}
