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

#ifndef LPFAP_PROPAGATION_HPP
#define LPFAP_PROPAGATION_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lpfap/model.hpp"

namespace lpfap {

/// Current variable bounds during a search, with an undo trail.
///
/// Integral variables always hold integral bounds; every change is pushed
/// on the trail so that undo(mark) restores the exact earlier state.
class Domain {
 public:
  struct TrailEntry {
    int var;
    double oldLower;
    double oldUpper;
  };

  Domain() = default;
  explicit Domain(const MipInstance& instance);

  int size() const { return static_cast<int>(lower_.size()); }
  double lower(int j) const { return lower_[j]; }
  double upper(int j) const { return upper_[j]; }
  bool isIntegral(int j) const { return integral_[j]; }
  bool isFixed(int j) const { return lower_[j] == upper_[j]; }
  const std::vector<double>& lowers() const { return lower_; }
  const std::vector<double>& uppers() const { return upper_; }

  /// Sets both bounds; integral bounds are rounded inward. The caller must
  /// ensure lower <= upper after rounding. Marks the variable dirty when a
  /// bound actually changed. Returns whether anything changed.
  bool setBounds(int j, double lower, double upper);

  std::size_t mark() const { return trail_.size(); }
  /// Restores the state at `mark` and clears the dirty queue.
  void undo(std::size_t mark);

  /// FIFO of variables whose bounds changed since they were last popped.
  bool hasDirty() const { return dirtyHead_ < dirty_.size(); }
  int popDirty();
  void markDirty(int j);
  void clearDirty();

  /// Same bounds (dirty queue and trail are not compared).
  bool sameBounds(const Domain& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_;
  }
  /// Componentwise containment: this domain lies inside `outer`.
  bool containedIn(const Domain& outer) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<char> integral_;
  std::vector<TrailEntry> trail_;
  std::vector<int> dirty_;
  std::size_t dirtyHead_ = 0;
  std::vector<char> inDirty_;
};

/// A literal is a binary variable or its complement.
struct Literal {
  int var;
  bool positive;

  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

/// Sets of binary literals of which at most one can be true, extracted from
/// set-packing style rows. Cliques of two literals act as implications.
class CliqueTable {
 public:
  CliqueTable() = default;
  CliqueTable(int numVars, std::vector<std::vector<Literal>> cliques);

  std::size_t size() const { return cliques_.size(); }
  const std::vector<Literal>& clique(std::size_t k) const { return cliques_[k]; }
  const std::vector<std::vector<Literal>>& cliques() const { return cliques_; }
  /// Indices of the cliques containing the literal.
  const std::vector<int>& containing(Literal lit) const {
    return lit.positive ? positive_[lit.var] : negative_[lit.var];
  }
  int numVars() const { return static_cast<int>(positive_.size()); }

 private:
  std::vector<std::vector<Literal>> cliques_;
  std::vector<std::vector<int>> positive_;
  std::vector<std::vector<int>> negative_;
};

/// Extracts one clique per row side that, over binaries and after
/// complementing negative coefficients, reads sum(k * lit) <= rhs with a
/// common coefficient k > 0 and 1 <= rhs / k < 2.
CliqueTable buildCliqueTable(const MipInstance& instance);

struct PropagationConfig {
  double feasTol = 1e-6;
  /// Minimum relative improvement 1e-9 (1 + |old|) for a tightening.
  double minImprovement = 1e-9;
  /// Tightening budget per call; 0 means 100 * n. Checked after each row,
  /// so the row that crosses it still completes.
  std::int64_t maxTightenings = 0;
};

enum class PropagationStatus { Fixpoint, Saturated, Infeasible };

const char* toString(PropagationStatus status);

struct PropagationResult {
  PropagationStatus status = PropagationStatus::Fixpoint;
  std::int64_t tightenings = 0;
  /// Row (or -1 for a clique) that proved infeasibility.
  int conflictRow = -1;

  bool infeasible() const { return status == PropagationStatus::Infeasible; }
};

/// Activity-based linear bound tightening plus clique propagation.
///
/// The propagator consumes the domain's dirty queue and tightens the domain
/// in place, recording changes on its trail. On Infeasible the domain holds
/// whatever sound tightenings were applied before the conflict (it never
/// holds lower > upper); callers backtrack with Domain::undo.
class Propagator {
 public:
  Propagator(const MipInstance& instance, const CliqueTable& cliques,
             PropagationConfig config = {});
  // Both arguments are held by reference.
  Propagator(const MipInstance&&, const CliqueTable&, PropagationConfig = {}) = delete;
  Propagator(const MipInstance&, const CliqueTable&&, PropagationConfig = {}) = delete;

  PropagationResult propagate(Domain& domain);

  /// Marks every variable dirty, then propagates.
  PropagationResult propagateAll(Domain& domain);

 private:
  bool propagateRow(int row, Domain& domain, std::int64_t& tightenings);
  bool propagateCliques(int var, Domain& domain, std::int64_t& tightenings);
  // Applies lower/upper candidates subject to the improvement threshold.
  // Returns false when the candidate empties the domain.
  bool tighten(Domain& domain, int j, double newLower, double newUpper,
               std::int64_t& tightenings);

  const MipInstance& instance_;
  const CliqueTable& cliques_;
  PropagationConfig config_;
  std::vector<char> rowQueued_;
  std::vector<int> rowQueue_;
  std::vector<double> minContrib_;
  std::vector<double> maxContrib_;
};

}  // namespace lpfap

#endif  // LPFAP_PROPAGATION_HPP
