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

#include "lpfap/model.hpp"

#include <algorithm>
#include <cmath>

namespace lpfap {

std::vector<int> MipInstance::integerIndices() const {
  std::vector<int> out;
  for (int j = 0; j < numCols(); ++j)
    if (isIntegral(j)) out.push_back(j);
  return out;
}

double MipInstance::evaluate(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < objective.size(); ++j) sum += objective[j] * x[j];
  return sum + objectiveOffset;
}

void finalizeInstance(MipInstance& inst) {
  const auto m = static_cast<std::size_t>(inst.numRows());
  const auto n = static_cast<std::size_t>(inst.numCols());
  if (inst.objective.size() != n || inst.colLower.size() != n ||
      inst.colUpper.size() != n || inst.varType.size() != n ||
      inst.rowLower.size() != m || inst.rowUpper.size() != m)
    throw InvalidInstance("instance vectors do not match matrix shape");

  if (inst.rowNames.empty())
    for (std::size_t i = 0; i < m; ++i)
      inst.rowNames.push_back("R" + std::to_string(i));
  if (inst.colNames.empty())
    for (std::size_t j = 0; j < n; ++j)
      inst.colNames.push_back("C" + std::to_string(j));
  if (inst.rowNames.size() != m || inst.colNames.size() != n)
    throw InvalidInstance("name vectors do not match matrix shape");

  for (std::size_t i = 0; i < m; ++i) {
    if (std::isnan(inst.rowLower[i]) || std::isnan(inst.rowUpper[i]) ||
        inst.rowLower[i] > inst.rowUpper[i] || inst.rowLower[i] == kInf ||
        inst.rowUpper[i] == -kInf)
      throw InvalidInstance("row " + inst.rowNames[i] +
                            " has inconsistent bounds");
  }
  for (std::size_t j = 0; j < n; ++j) {
    double& lo = inst.colLower[j];
    double& hi = inst.colUpper[j];
    if (!std::isfinite(inst.objective[j]))
      throw InvalidInstance("column " + inst.colNames[j] +
                            " has a non-finite objective coefficient");
    if (inst.varType[j] == VarType::Integer) {
      if (std::isfinite(lo)) lo = std::ceil(lo - 1e-9);
      if (std::isfinite(hi)) hi = std::floor(hi + 1e-9);
    }
    if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInf ||
        hi == -kInf)
      throw InvalidInstance("column " + inst.colNames[j] +
                            " has inconsistent bounds");
  }
}

MipInstance lpRelaxation(const MipInstance& instance) {
  MipInstance relaxed = instance;
  std::fill(relaxed.varType.begin(), relaxed.varType.end(),
            VarType::Continuous);
  return relaxed;
}

namespace {

// Violation of value against [lo, hi], scaled by 1 + |violated side|.
double relativeViolation(double value, double lo, double hi) {
  if (value < lo) return (lo - value) / (1.0 + std::abs(lo));
  if (value > hi) return (value - hi) / (1.0 + std::abs(hi));
  return 0.0;
}

}  // namespace

MipSolution checkFeasibility(const MipInstance& inst,
                             std::span<const double> x, double relTol) {
  if (x.size() != static_cast<std::size_t>(inst.numCols()))
    throw std::invalid_argument("checkFeasibility: x has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(inst.numCols()));
  MipSolution sol;
  sol.x.assign(x.begin(), x.end());
  sol.objective = inst.evaluate(x);

  std::vector<double> activity(inst.numRows());
  inst.matrix.multiply(x, activity);
  for (int i = 0; i < inst.numRows(); ++i)
    sol.maxRowViolation =
        std::max(sol.maxRowViolation,
                 relativeViolation(activity[i], inst.rowLower[i],
                                   inst.rowUpper[i]));
  for (int j = 0; j < inst.numCols(); ++j) {
    sol.maxBoundViolation = std::max(
        sol.maxBoundViolation,
        relativeViolation(x[j], inst.colLower[j], inst.colUpper[j]));
    if (inst.isIntegral(j))
      sol.maxIntegralityViolation = std::max(sol.maxIntegralityViolation,
                                             std::abs(x[j] - std::round(x[j])));
  }
  const bool finite = std::all_of(x.begin(), x.end(),
                                  [](double v) { return std::isfinite(v); });
  sol.feasible = finite && sol.maxRowViolation <= relTol &&
                 sol.maxBoundViolation <= relTol &&
                 sol.maxIntegralityViolation <= relTol;
  return sol;
}

double gapPercent(double objective, double reference) {
  const double gap = 100.0 * std::abs(objective - reference) /
                     std::max(std::abs(reference), kGapReferenceFloor);
  return std::min(gap, kGapCap);
}

}  // namespace lpfap
