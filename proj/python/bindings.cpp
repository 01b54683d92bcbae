// Copyright 2026 the lpfap Authors
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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "lpfap/fixprop.hpp"
#include "lpfap/folp.hpp"
#include "lpfap/harness.hpp"
#include "lpfap/model.hpp"
#include "lpfap/mps.hpp"

namespace py = pybind11;
using namespace lpfap;

namespace {

MpsFormat formatOf(bool fixed) { return fixed ? MpsFormat::Fixed : MpsFormat::Free; }

MipInstance makeInstance(const std::vector<std::vector<double>>& a,
                         std::vector<double> objective, std::vector<double> rowLower,
                         std::vector<double> rowUpper, std::vector<double> colLower,
                         std::vector<double> colUpper, std::vector<bool> integer,
                         bool maximize, std::string name) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(objective.size());
  std::vector<SparseMatrix::Triplet> entries;
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(a[i].size()) != n)
      throw std::invalid_argument("row " + std::to_string(i) + " has the wrong length");
    for (int j = 0; j < n; ++j)
      if (a[i][j] != 0.0) entries.push_back({i, j, a[i][j]});
  }
  MipInstance inst;
  inst.name = std::move(name);
  inst.matrix = SparseMatrix::fromTriplets(m, n, std::move(entries));
  inst.maximize = maximize;
  // stored as a minimization
  if (maximize)
    for (double& c : objective) c = -c;
  inst.objective = std::move(objective);
  inst.rowLower = std::move(rowLower);
  inst.rowUpper = std::move(rowUpper);
  inst.colLower = std::move(colLower);
  inst.colUpper = std::move(colUpper);
  if (integer.empty()) integer.assign(n, false);
  if (static_cast<int>(integer.size()) != n)
    throw std::invalid_argument("integer flags do not match the column count");
  for (bool isInt : integer) inst.varType.push_back(isInt ? VarType::Integer : VarType::Continuous);
  finalizeInstance(inst);
  return inst;
}

// Dense copy of the constraint matrix.
std::vector<std::vector<double>> denseMatrix(const MipInstance& inst) {
  std::vector<std::vector<double>> out(inst.numRows(), std::vector<double>(inst.numCols(), 0.0));
  for (int i = 0; i < inst.numRows(); ++i) {
    const auto row = inst.matrix.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) out[i][row.index[k]] = row.value[k];
  }
  return out;
}

std::string runHeuristicJson(const MipInstance& inst, const std::string& strategy,
                             const std::string& tiebreak, double initTol, double finalTol,
                             std::uint64_t seed, std::int64_t backtrackLimit, double timeLimit,
                             std::optional<double> reference, bool withTimings) {
  HeuristicConfig config;
  config.strategy = parseVariableStrategy(strategy);
  config.tiebreaker = parseTieBreaker(tiebreak);
  config.initialLpTolerance = initTol;
  config.finalLpTolerance = finalTol;
  config.seed = seed;
  config.backtrackLimit = backtrackLimit;
  config.timeLimit = timeLimit;
  RunReport r;
  {
    py::gil_scoped_release release;
    r = runHeuristic(inst, config, reference);
  }
  auto j = toJson(r, withTimings);
  j["solution"] = r.solution;
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_lpfap, m) {
  m.doc() = "LP-guided fix-and-propagate primal heuristic.";

  py::class_<MipInstance>(m, "Instance")
      .def_readonly("name", &MipInstance::name)
      .def_property_readonly("num_rows", &MipInstance::numRows)
      .def_property_readonly("num_cols", &MipInstance::numCols)
      .def_readonly("maximize", &MipInstance::maximize)
      .def_property_readonly("objective",
                             [](const MipInstance& inst) {
                               std::vector<double> c = inst.objective;
                               if (inst.maximize)
                                 for (double& v : c) v = -v;
                               return c;
                             })
      .def_readonly("objective_offset", &MipInstance::objectiveOffset)
      .def_readonly("row_lower", &MipInstance::rowLower)
      .def_readonly("row_upper", &MipInstance::rowUpper)
      .def_readonly("col_lower", &MipInstance::colLower)
      .def_readonly("col_upper", &MipInstance::colUpper)
      .def_readonly("row_names", &MipInstance::rowNames)
      .def_readonly("col_names", &MipInstance::colNames)
      .def_property_readonly("integer_indices", &MipInstance::integerIndices)
      .def("dense_matrix", &denseMatrix)
      .def("evaluate",
           [](const MipInstance& inst, const std::vector<double>& x) {
             if (static_cast<int>(x.size()) != inst.numCols())
               throw std::invalid_argument("x has the wrong length");
             return inst.externalObjective(inst.evaluate(x));
           })
      .def("lp_relaxation", &lpRelaxation)
      .def("__eq__", [](const MipInstance& a, const MipInstance& b) { return a == b; })
      .def("__repr__", [](const MipInstance& inst) {
        return "<Instance '" + inst.name + "' rows=" + std::to_string(inst.numRows()) +
               " cols=" + std::to_string(inst.numCols()) + ">";
      });

  m.def("make_instance", &makeInstance, py::arg("a"), py::arg("objective"),
        py::arg("row_lower"), py::arg("row_upper"), py::arg("col_lower"), py::arg("col_upper"),
        py::arg("integer") = std::vector<bool>{}, py::arg("maximize") = false,
        py::arg("name") = "");
  m.def("read_mps", [](const std::string& path, bool fixed) { return readMpsFile(path, formatOf(fixed)); },
        py::arg("path"), py::arg("fixed") = false);
  m.def("parse_mps", [](const std::string& text, bool fixed) { return parseMps(text, formatOf(fixed)); },
        py::arg("text"), py::arg("fixed") = false);
  m.def("write_mps", &writeMpsString, py::arg("instance"));

  m.def(
      "solve_lp",
      [](const MipInstance& inst, double tolerance, std::int64_t maxIterations, double timeLimit) {
        FolpConfig config;
        config.tolerance = tolerance;
        config.maxIterations = maxIterations;
        config.timeLimit = timeLimit;
        LpSolution sol;
        {
          py::gil_scoped_release release;
          sol = pdhgSolve(inst, config);
        }
        py::dict out;
        out["status"] = toString(sol.status);
        out["objective"] = inst.externalObjective(sol.primalObjective);
        out["dual_objective"] = inst.externalObjective(sol.dualObjective);
        out["iterations"] = sol.iterations;
        out["restarts"] = sol.restartMeasures.size();
        out["primal_residual"] = sol.residuals.primal;
        out["dual_residual"] = sol.residuals.dual;
        out["gap_residual"] = sol.residuals.gap;
        out["x"] = sol.x;
        out["y"] = sol.y;
        out["reduced_costs"] = sol.reducedCosts;
        return out;
      },
      py::arg("instance"), py::arg("tolerance") = 1e-4, py::arg("max_iterations") = 1'000'000,
      py::arg("time_limit") = kInf);

  m.def("_run_heuristic_json", &runHeuristicJson, py::arg("instance"),
        py::arg("strategy") = "Frac", py::arg("tiebreak") = "None", py::arg("init_tol") = 1e-4,
        py::arg("final_tol") = 1e-8, py::arg("seed") = 0, py::arg("backtrack_limit") = 1000,
        py::arg("time_limit") = kInf, py::arg("reference") = py::none(),
        py::arg("timings") = true);

  m.def(
      "check_feasibility",
      [](const MipInstance& inst, const std::vector<double>& x, double tol) {
        const auto s = checkFeasibility(inst, x, tol);
        py::dict out;
        out["feasible"] = s.feasible;
        out["objective"] = s.objective;
        out["max_row_violation"] = s.maxRowViolation;
        out["max_bound_violation"] = s.maxBoundViolation;
        out["max_integrality_violation"] = s.maxIntegralityViolation;
        return out;
      },
      py::arg("instance"), py::arg("x"), py::arg("tol") = 1e-6);

  m.def("gap_percent", &gapPercent, py::arg("objective"), py::arg("reference"));
  m.def(
      "shifted_geomean",
      [](const std::vector<double>& values, double shift) { return shiftedGeomean(values, shift); },
      py::arg("values"), py::arg("shift") = 1.0);
  m.def("permute", &permuteInstance, py::arg("instance"), py::arg("seed"));
  m.def(
      "branch",
      [](double a, double lower, double upper, double cost) {
        std::vector<std::pair<double, double>> out;
        for (const auto& c : branch(0, a, lower, upper, cost)) out.emplace_back(c.lower, c.upper);
        return out;
      },
      py::arg("a"), py::arg("lower"), py::arg("upper"), py::arg("cost"));
  m.def(
      "aggregate_csv",
      [](const std::string& jsonl) { return aggregateCsv(aggregate(parseJsonLines(jsonl))); },
      py::arg("jsonl"));

  py::register_exception<MpsError>(m, "MpsError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
}
