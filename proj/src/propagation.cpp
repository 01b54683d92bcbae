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

#include "lpfap/propagation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>

namespace lpfap {

// ---------------------------------------------------------------- Domain

Domain::Domain(const MipInstance& inst)
    : lower_(inst.colLower),
      upper_(inst.colUpper),
      integral_(inst.numCols()),
      inDirty_(inst.numCols(), 0) {
  for (int j = 0; j < inst.numCols(); ++j) integral_[j] = inst.isIntegral(j);
}

bool Domain::setBounds(int j, double lo, double hi) {
  if (integral_[j]) {
    lo = std::ceil(lo);
    hi = std::floor(hi);
  }
  assert(lo <= hi);
  if (lo == lower_[j] && hi == upper_[j]) return false;
  trail_.push_back({j, lower_[j], upper_[j]});
  lower_[j] = lo;
  upper_[j] = hi;
  markDirty(j);
  return true;
}

void Domain::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    const TrailEntry& e = trail_.back();
    lower_[e.var] = e.oldLower;
    upper_[e.var] = e.oldUpper;
    trail_.pop_back();
  }
  clearDirty();
}

int Domain::popDirty() {
  assert(hasDirty());
  const int j = dirty_[dirtyHead_++];
  inDirty_[j] = 0;
  if (dirtyHead_ == dirty_.size()) {
    dirty_.clear();
    dirtyHead_ = 0;
  }
  return j;
}

void Domain::markDirty(int j) {
  if (inDirty_[j]) return;
  inDirty_[j] = 1;
  dirty_.push_back(j);
}

void Domain::clearDirty() {
  for (std::size_t k = dirtyHead_; k < dirty_.size(); ++k) inDirty_[dirty_[k]] = 0;
  dirty_.clear();
  dirtyHead_ = 0;
}

bool Domain::containedIn(const Domain& outer) const {
  if (outer.size() != size()) return false;
  for (int j = 0; j < size(); ++j)
    if (lower_[j] < outer.lower_[j] || upper_[j] > outer.upper_[j]) return false;
  return true;
}

// ----------------------------------------------------------- CliqueTable

CliqueTable::CliqueTable(int numVars, std::vector<std::vector<Literal>> cliques)
    : cliques_(std::move(cliques)), positive_(numVars), negative_(numVars) {
  for (std::size_t k = 0; k < cliques_.size(); ++k) {
    for (const Literal& lit : cliques_[k]) {
      assert(lit.var >= 0 && lit.var < numVars);
      (lit.positive ? positive_ : negative_)[lit.var].push_back(static_cast<int>(k));
    }
  }
}

namespace {

// sum(coef_k * x_k) <= rhs over binaries, complemented into
// sum(|coef_k| * lit_k) <= rhs - sum_{coef_k < 0} coef_k.
bool extractClique(const MipInstance& inst, SparseVectorView row, double sign,
                   double rhs, std::vector<Literal>& out) {
  if (row.size() < 2) return false;
  out.clear();
  const double k = std::abs(row.value[0]);
  for (std::size_t p = 0; p < row.size(); ++p) {
    const int j = row.index[p];
    const double a = sign * row.value[p];
    if (!inst.isBinary(j)) return false;
    if (std::abs(std::abs(a) - k) > 1e-9 * k) return false;
    if (a < 0.0) rhs -= a;
    out.push_back({j, a > 0.0});
  }
  const double ratio = rhs / k;
  if (ratio < 1.0 - 1e-9 || ratio >= 2.0 - 1e-9) return false;
  std::sort(out.begin(), out.end());
  return true;
}

}  // namespace

CliqueTable buildCliqueTable(const MipInstance& inst) {
  std::vector<std::vector<Literal>> cliques;
  std::set<std::vector<Literal>> seen;
  std::vector<Literal> lits;
  for (int i = 0; i < inst.numRows(); ++i) {
    const auto row = inst.matrix.row(i);
    if (std::isfinite(inst.rowUpper[i]) &&
        extractClique(inst, row, 1.0, inst.rowUpper[i], lits) &&
        seen.insert(lits).second)
      cliques.push_back(lits);
    if (std::isfinite(inst.rowLower[i]) &&
        extractClique(inst, row, -1.0, -inst.rowLower[i], lits) &&
        seen.insert(lits).second)
      cliques.push_back(lits);
  }
  return CliqueTable(inst.numCols(), std::move(cliques));
}

// ------------------------------------------------------------ Propagator

const char* toString(PropagationStatus status) {
  switch (status) {
    case PropagationStatus::Fixpoint: return "Fixpoint";
    case PropagationStatus::Saturated: return "Saturated";
    case PropagationStatus::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

Propagator::Propagator(const MipInstance& instance, const CliqueTable& cliques,
                       PropagationConfig config)
    : instance_(instance),
      cliques_(cliques),
      config_(config),
      rowQueued_(instance.numRows(), 0) {
  if (config_.maxTightenings <= 0)
    config_.maxTightenings = 100 * std::max<std::int64_t>(1, instance.numCols());
}

bool Propagator::tighten(Domain& domain, int j, double newLower,
                         double newUpper, std::int64_t& tightenings) {
  const double lo = domain.lower(j);
  const double hi = domain.upper(j);
  if (domain.isIntegral(j)) {
    newLower = std::ceil(newLower - config_.feasTol);
    newUpper = std::floor(newUpper + config_.feasTol);
  }
  const bool raiseLower = newLower > lo + config_.minImprovement * (1.0 + std::abs(lo));
  const bool lowerUpper = newUpper < hi - config_.minImprovement * (1.0 + std::abs(hi));
  double l = raiseLower ? newLower : lo;
  double u = lowerUpper ? newUpper : hi;
  if (l > u) {
    if (domain.isIntegral(j) || l - u > config_.feasTol) return false;
    // continuous crossing within tolerance: collapse onto the untouched side
    if (raiseLower && !lowerUpper)
      l = u;
    else
      u = l;
  }
  if (raiseLower || lowerUpper) {
    domain.setBounds(j, l, u);
    ++tightenings;
  }
  return true;
}

bool Propagator::propagateRow(int i, Domain& domain, std::int64_t& tightenings) {
  const auto row = instance_.matrix.row(i);
  const double lhs = instance_.rowLower[i];
  const double rhs = instance_.rowUpper[i];
  if (!std::isfinite(lhs) && !std::isfinite(rhs)) return true;

  double minAct = 0.0, maxAct = 0.0;
  int minInf = 0, maxInf = 0;
  const std::size_t len = row.size();
  minContrib_.resize(len);
  maxContrib_.resize(len);
  for (std::size_t p = 0; p < len; ++p) {
    const int j = row.index[p];
    const double a = row.value[p];
    const double lo = domain.lower(j);
    const double hi = domain.upper(j);
    const double cmin = a > 0.0 ? a * lo : a * hi;
    const double cmax = a > 0.0 ? a * hi : a * lo;
    minContrib_[p] = cmin;
    maxContrib_[p] = cmax;
    if (std::isfinite(cmin)) minAct += cmin; else ++minInf;
    if (std::isfinite(cmax)) maxAct += cmax; else ++maxInf;
  }

  if (minInf == 0 && minAct > rhs + config_.feasTol) return false;
  if (maxInf == 0 && maxAct < lhs - config_.feasTol) return false;

  const bool useRhs = std::isfinite(rhs) && minInf <= 1;
  const bool useLhs = std::isfinite(lhs) && maxInf <= 1;
  if (!useRhs && !useLhs) return true;

  // activity of the other entries, defined when at most the entry itself
  // contributes an infinite term
  auto residualOf = [](double act, int numInf, double contrib, double& residual) {
    if (std::isfinite(contrib)) {
      if (numInf != 0) return false;
      residual = act - contrib;
    } else {
      residual = act;
    }
    return true;
  };

  for (std::size_t p = 0; p < len; ++p) {
    const int j = row.index[p];
    const double a = row.value[p];
    double newLower = -kInf;
    double newUpper = kInf;
    double residual;
    if (useRhs && residualOf(minAct, minInf, minContrib_[p], residual)) {
      const double bound = (rhs - residual) / a;
      if (a > 0.0) newUpper = bound; else newLower = bound;
    }
    if (useLhs && residualOf(maxAct, maxInf, maxContrib_[p], residual)) {
      const double bound = (lhs - residual) / a;
      if (a > 0.0) newLower = std::max(newLower, bound);
      else newUpper = std::min(newUpper, bound);
    }
    if (!tighten(domain, j, newLower, newUpper, tightenings)) return false;
  }
  return true;
}

bool Propagator::propagateCliques(int j, Domain& domain, std::int64_t& tightenings) {
  if (j >= cliques_.numVars() || !domain.isFixed(j)) return true;
  const double v = domain.lower(j);
  if (v != 0.0 && v != 1.0) return true;
  // the literal of j that is now true
  const Literal trueLit{j, v == 1.0};
  for (int k : cliques_.containing(trueLit)) {
    for (const Literal& lit : cliques_.clique(k)) {
      if (lit.var == j) continue;
      // force lit false: positive -> x = 0, negative -> x = 1
      const double target = lit.positive ? 0.0 : 1.0;
      const double lo = domain.lower(lit.var);
      const double hi = domain.upper(lit.var);
      if (target < lo || target > hi) return false;
      if (lo != hi) {
        domain.setBounds(lit.var, target, target);
        ++tightenings;
      }
    }
  }
  return true;
}

PropagationResult Propagator::propagate(Domain& domain) {
  PropagationResult result;
  std::size_t head = 0;
  auto abort = [&](PropagationStatus status, int conflict) {
    for (std::size_t k = head; k < rowQueue_.size(); ++k) rowQueued_[rowQueue_[k]] = 0;
    rowQueue_.clear();
    domain.clearDirty();
    result.status = status;
    result.conflictRow = conflict;
    return result;
  };

  while (true) {
    while (domain.hasDirty()) {
      const int j = domain.popDirty();
      if (!propagateCliques(j, domain, result.tightenings))
        return abort(PropagationStatus::Infeasible, -1);
      const auto col = instance_.matrix.col(j);
      for (std::size_t p = 0; p < col.size(); ++p) {
        const int i = col.index[p];
        if (!rowQueued_[i]) {
          rowQueued_[i] = 1;
          rowQueue_.push_back(i);
        }
      }
    }
    if (head == rowQueue_.size()) break;
    const int i = rowQueue_[head++];
    rowQueued_[i] = 0;
    if (!propagateRow(i, domain, result.tightenings))
      return abort(PropagationStatus::Infeasible, i);
    if (result.tightenings >= config_.maxTightenings)
      return abort(PropagationStatus::Saturated, -1);
    if (head == rowQueue_.size()) {
      rowQueue_.clear();
      head = 0;
    }
  }
  rowQueue_.clear();
  result.status = PropagationStatus::Fixpoint;
  return result;
}

PropagationResult Propagator::propagateAll(Domain& domain) {
  for (int j = 0; j < domain.size(); ++j) domain.markDirty(j);
  return propagate(domain);
}

}  // namespace lpfap
