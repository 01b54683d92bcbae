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

#include "lpfap/folp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace lpfap {

void FolpConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (maxIterations <= 0) throw std::invalid_argument("maxIterations must be > 0");
  if (!(timeLimit > 0.0)) throw std::invalid_argument("timeLimit must be > 0");
  if (!(restartRatio > 0.0 && restartRatio < 1.0))
    throw std::invalid_argument("restartRatio must be in (0,1)");
  if (!(necessaryRestartRatio >= restartRatio && necessaryRestartRatio < 1.0))
    throw std::invalid_argument("necessaryRestartRatio must be in [restartRatio,1)");
  if (!(stepScale > 0.0 && stepScale < 1.0))
    throw std::invalid_argument("stepScale must be in (0,1)");
  if (!(primalWeight > 0.0)) throw std::invalid_argument("primalWeight must be > 0");
  if (powerIterations <= 0 || checkFrequency <= 0 || ruizIterations < 0)
    throw std::invalid_argument("iteration counts must be positive");
}

const char* toString(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::IterLimit: return "IterLimit";
    case LpStatus::TimeLimit: return "TimeLimit";
    case LpStatus::PrimalInfeasibleGuess: return "PrimalInfeasibleGuess";
  }
  return "Unknown";
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double finiteNorm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v)
    if (std::isfinite(x)) s += x * x;
  return std::sqrt(s);
}

void checkDims(const MipInstance& inst, std::size_t nx, std::size_t ny) {
  if (nx != static_cast<std::size_t>(inst.numCols()) ||
      ny != static_cast<std::size_t>(inst.numRows()))
    throw std::invalid_argument("dimension mismatch: got x[" + std::to_string(nx) +
                                "], y[" + std::to_string(ny) + "] for a " +
                                std::to_string(inst.numRows()) + "x" +
                                std::to_string(inst.numCols()) + " instance");
}

// Dual contribution of a row dual: y > 0 prices L, y < 0 prices U.
// Entries of the wrong sign on an infinite side contribute nothing.
double rowDualTerm(double y, double lo, double hi) {
  if (y > 0.0) return std::isfinite(lo) ? y * lo : 0.0;
  if (y < 0.0) return std::isfinite(hi) ? y * hi : 0.0;
  return 0.0;
}

// Part of the reduced cost r that the column bounds can absorb.
double boundDual(double r, double lo, double hi) {
  const bool hasLo = std::isfinite(lo);
  const bool hasHi = std::isfinite(hi);
  if (hasLo && hasHi) return r;
  if (hasLo) return std::max(r, 0.0);
  if (hasHi) return std::min(r, 0.0);
  return 0.0;
}

double boundDualTerm(double z, double lo, double hi) {
  if (z > 0.0) return z * lo;
  if (z < 0.0) return z * hi;
  return 0.0;
}

struct Evaluation {
  Residuals residuals;
  double primalObjective = 0.0;
  double dualObjective = 0.0;
  std::vector<double> reducedCosts;

  double measure() const {
    return std::sqrt(residuals.primal * residuals.primal +
                     residuals.dual * residuals.dual +
                     residuals.gap * residuals.gap);
  }
};

Evaluation evaluate(const MipInstance& inst, std::span<const double> x,
                    std::span<const double> y) {
  checkDims(inst, x.size(), y.size());
  Evaluation ev;
  const int m = inst.numRows();
  const int n = inst.numCols();

  std::vector<double> activity(m);
  inst.matrix.multiply(x, activity);
  double distSq = 0.0;
  for (int i = 0; i < m; ++i) {
    double d = 0.0;
    if (activity[i] < inst.rowLower[i]) d = inst.rowLower[i] - activity[i];
    if (activity[i] > inst.rowUpper[i]) d = activity[i] - inst.rowUpper[i];
    distSq += d * d;
  }
  const double boundScale =
      1.0 + std::max(finiteNorm2(inst.rowLower), finiteNorm2(inst.rowUpper));
  ev.residuals.primal = std::sqrt(distSq) / boundScale;

  ev.reducedCosts.resize(n);
  inst.matrix.multiplyTransposed(y, ev.reducedCosts);
  double dualObj = inst.objectiveOffset;
  for (int i = 0; i < m; ++i)
    dualObj += rowDualTerm(y[i], inst.rowLower[i], inst.rowUpper[i]);
  double dualResSq = 0.0;
  for (int j = 0; j < n; ++j) {
    const double r = inst.objective[j] - ev.reducedCosts[j];
    ev.reducedCosts[j] = r;
    const double z = boundDual(r, inst.colLower[j], inst.colUpper[j]);
    dualResSq += (r - z) * (r - z);
    dualObj += boundDualTerm(z, inst.colLower[j], inst.colUpper[j]);
  }
  ev.residuals.dual = std::sqrt(dualResSq) / (1.0 + norm2(inst.objective));

  ev.primalObjective = inst.evaluate(x);
  ev.dualObjective = dualObj;
  ev.residuals.gap =
      std::abs(ev.primalObjective - ev.dualObjective) /
      (1.0 + std::abs(ev.primalObjective) + std::abs(ev.dualObjective));
  return ev;
}

// Scaled working copy: A_s = D_r A D_c, x = D_c x_s, y = D_r y_s.
struct ScaledProblem {
  SparseMatrix matrix;
  std::vector<double> rowScale;
  std::vector<double> colScale;
  std::vector<double> objective;
  std::vector<double> rowLower, rowUpper;
  std::vector<double> colLower, colUpper;
};

ScaledProblem rescale(const MipInstance& inst, int ruizIterations) {
  const int m = inst.numRows();
  const int n = inst.numCols();
  ScaledProblem sp;
  sp.rowScale.assign(m, 1.0);
  sp.colScale.assign(n, 1.0);
  sp.matrix = inst.matrix;
  std::vector<double> rowMax(m), colMax(n);
  for (int it = 0; it < ruizIterations; ++it) {
    std::fill(rowMax.begin(), rowMax.end(), 0.0);
    std::fill(colMax.begin(), colMax.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      const auto row = sp.matrix.row(i);
      for (std::size_t k = 0; k < row.size(); ++k) {
        const double a = std::abs(row.value[k]);
        rowMax[i] = std::max(rowMax[i], a);
        colMax[row.index[k]] = std::max(colMax[row.index[k]], a);
      }
    }
    for (int i = 0; i < m; ++i)
      if (rowMax[i] > 0.0) sp.rowScale[i] /= std::sqrt(rowMax[i]);
    for (int j = 0; j < n; ++j)
      if (colMax[j] > 0.0) sp.colScale[j] /= std::sqrt(colMax[j]);
    sp.matrix = inst.matrix.scaled(sp.rowScale, sp.colScale);
  }
  sp.objective.resize(n);
  sp.colLower.resize(n);
  sp.colUpper.resize(n);
  for (int j = 0; j < n; ++j) {
    sp.objective[j] = inst.objective[j] * sp.colScale[j];
    sp.colLower[j] = inst.colLower[j] / sp.colScale[j];
    sp.colUpper[j] = inst.colUpper[j] / sp.colScale[j];
  }
  sp.rowLower.resize(m);
  sp.rowUpper.resize(m);
  for (int i = 0; i < m; ++i) {
    sp.rowLower[i] = inst.rowLower[i] * sp.rowScale[i];
    sp.rowUpper[i] = inst.rowUpper[i] * sp.rowScale[i];
  }
  return sp;
}

// Largest singular value of A by power iteration on A^T A.
double estimateNorm(const SparseMatrix& a, int iterations) {
  const int n = a.numCols();
  if (n == 0 || a.nnz() == 0) return 0.0;
  std::vector<double> v(n), av(a.numRows()), w(n);
  // deterministic, non-symmetric start vector
  for (int j = 0; j < n; ++j) v[j] = 1.0 + 0.5 * std::sin(1.0 + j);
  double nv = norm2(v);
  for (double& e : v) e /= nv;
  double sigmaSq = 0.0;
  for (int it = 0; it < iterations; ++it) {
    a.multiply(v, av);
    a.multiplyTransposed(av, w);
    sigmaSq = norm2(w);
    if (sigmaSq == 0.0) return 0.0;
    for (int j = 0; j < n; ++j) v[j] = w[j] / sigmaSq;
  }
  return std::sqrt(sigmaSq);
}

}  // namespace

std::vector<double> reducedCosts(const MipInstance& inst,
                                 std::span<const double> y) {
  checkDims(inst, inst.numCols(), y.size());
  std::vector<double> r(inst.numCols());
  inst.matrix.multiplyTransposed(y, r);
  for (int j = 0; j < inst.numCols(); ++j) r[j] = inst.objective[j] - r[j];
  return r;
}

double dualObjective(const MipInstance& inst, std::span<const double> y) {
  const std::vector<double> x(inst.numCols(), 0.0);
  return evaluate(inst, x, y).dualObjective;
}

Residuals computeResiduals(const MipInstance& inst, std::span<const double> x,
                           std::span<const double> y) {
  return evaluate(inst, x, y).residuals;
}

LpSolution pdhgSolve(const MipInstance& inst, const FolpConfig& config) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const int m = inst.numRows();
  const int n = inst.numCols();

  const ScaledProblem sp = rescale(inst, config.ruizIterations);
  const double normA = estimateNorm(sp.matrix, config.powerIterations);
  const double eta = config.stepScale / std::max(normA, 1e-12);
  const double tau = eta / config.primalWeight;
  const double sigma = eta * config.primalWeight;

  std::vector<double> x(n), y(m, 0.0), aty(n, 0.0);
  for (int j = 0; j < n; ++j)
    x[j] = std::clamp(0.0, sp.colLower[j], sp.colUpper[j]);
  std::vector<double> xNew(n), xBar(n), axBar(m);
  std::vector<double> xSum(n, 0.0), ySum(m, 0.0);
  std::int64_t epochLength = 0;

  std::vector<double> xOrig(n), yOrig(m);
  auto unscale = [&](std::span<const double> xs, std::span<const double> ys,
                     double weight) {
    for (int j = 0; j < n; ++j)
      xOrig[j] = std::clamp(xs[j] * weight * sp.colScale[j], inst.colLower[j],
                            inst.colUpper[j]);
    for (int i = 0; i < m; ++i) yOrig[i] = ys[i] * weight * sp.rowScale[i];
    return evaluate(inst, xOrig, yOrig);
  };

  LpSolution sol;
  auto finish = [&](LpStatus status, const Evaluation& ev,
                    std::int64_t iterations) {
    sol.x = xOrig;
    sol.y = yOrig;
    sol.reducedCosts = ev.reducedCosts;
    sol.primalObjective = ev.primalObjective;
    sol.dualObjective = ev.dualObjective;
    sol.residuals = ev.residuals;
    sol.iterations = iterations;
    sol.status = status;
    return sol;
  };

  auto log = [&](std::int64_t iter, const Evaluation& ev) {
    if (!config.log) return;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "folp iter=%lld pres=%.3e dres=%.3e gap=%.3e pobj=%.10g "
                  "restarts=%zu\n",
                  static_cast<long long>(iter), ev.residuals.primal,
                  ev.residuals.dual, ev.residuals.gap, ev.primalObjective,
                  sol.restartMeasures.size());
    *config.log << buf;
  };

  Evaluation current = unscale(x, y, 1.0);
  log(0, current);
  if (current.residuals.within(config.tolerance))
    return finish(LpStatus::Optimal, current, 0);
  double lastRestartMeasure = current.measure();
  double previousCandidate = kInf;

  for (std::int64_t iter = 1; iter <= config.maxIterations; ++iter) {
    for (int j = 0; j < n; ++j) {
      xNew[j] = std::clamp(x[j] - tau * (sp.objective[j] - aty[j]),
                           sp.colLower[j], sp.colUpper[j]);
      xBar[j] = 2.0 * xNew[j] - x[j];
    }
    sp.matrix.multiply(xBar, axBar);
    for (int i = 0; i < m; ++i) {
      const double v = y[i] - sigma * axBar[i];
      y[i] = v - sigma * std::clamp(v / sigma, -sp.rowUpper[i], -sp.rowLower[i]);
    }
    x.swap(xNew);
    sp.matrix.multiplyTransposed(y, aty);
    for (int j = 0; j < n; ++j) xSum[j] += x[j];
    for (int i = 0; i < m; ++i) ySum[i] += y[i];
    ++epochLength;

    const bool lastIter = iter == config.maxIterations;
    if (iter % config.checkFrequency != 0 && !lastIter) continue;

    double maxAbs = 0.0;
    for (double v : x) maxAbs = std::max(maxAbs, std::abs(v));
    for (double v : y) maxAbs = std::max(maxAbs, std::abs(v));
    if (!std::isfinite(maxAbs))
      throw NumericalError("non-finite PDHG iterate at iteration " +
                           std::to_string(iter) + "; check instance scaling");

    const Evaluation average = unscale(xSum, ySum, 1.0 / epochLength);
    const std::vector<double> xAvgOrig = xOrig, yAvgOrig = yOrig;
    current = unscale(x, y, 1.0);
    log(iter, current);

    if (current.residuals.within(config.tolerance))
      return finish(LpStatus::Optimal, current, iter);
    if (average.residuals.within(config.tolerance)) {
      xOrig = xAvgOrig;
      yOrig = yAvgOrig;
      return finish(LpStatus::Optimal, average, iter);
    }
    if (maxAbs > config.divergenceThreshold)
      return finish(LpStatus::PrimalInfeasibleGuess, current, iter);
    if (std::chrono::duration<double>(Clock::now() - start).count() >
        config.timeLimit)
      return finish(LpStatus::TimeLimit, current, iter);
    if (lastIter) return finish(LpStatus::IterLimit, current, iter);

    const bool useAverage = average.measure() <= current.measure();
    const double candidate = useAverage ? average.measure() : current.measure();
    const bool sufficient = candidate <= config.restartRatio * lastRestartMeasure;
    const bool necessary =
        candidate <= config.necessaryRestartRatio * lastRestartMeasure &&
        candidate > previousCandidate;
    if (sufficient || necessary) {
      if (useAverage) {
        for (int j = 0; j < n; ++j) x[j] = xSum[j] / epochLength;
        for (int i = 0; i < m; ++i) y[i] = ySum[i] / epochLength;
        sp.matrix.multiplyTransposed(y, aty);
      }
      std::fill(xSum.begin(), xSum.end(), 0.0);
      std::fill(ySum.begin(), ySum.end(), 0.0);
      epochLength = 0;
      lastRestartMeasure = candidate;
      previousCandidate = kInf;
      sol.restartMeasures.push_back(candidate);
    } else {
      previousCandidate = candidate;
    }
  }
  return sol;  // unreachable: the last iteration always finishes
}

}  // namespace lpfap
