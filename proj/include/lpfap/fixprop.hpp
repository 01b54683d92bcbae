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

#ifndef LPFAP_FIXPROP_HPP
#define LPFAP_FIXPROP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpfap/folp.hpp"
#include "lpfap/model.hpp"
#include "lpfap/propagation.hpp"
#include "lpfap/random.hpp"

namespace lpfap {

enum class VariableStrategy { Frac, RedCost, Dual, Type, Random };
enum class TieBreaker { None, Frac, RedCost, Dual };

const char* toString(VariableStrategy s);
const char* toString(TieBreaker t);
/// Case-insensitive; throws std::invalid_argument on unknown names.
VariableStrategy parseVariableStrategy(std::string_view name);
TieBreaker parseTieBreaker(std::string_view name);

/// One child of a search node: new bounds for one variable.
struct BoundChange {
  double lower;
  double upper;
  int var;

  bool isFixing() const { return lower == upper; }
  bool operator==(const BoundChange&) const = default;
};

struct FixingOrder {
  std::vector<int> vars;
  VariableStrategy strategy = VariableStrategy::Frac;
  TieBreaker tiebreaker = TieBreaker::None;
};

/// Ordering keys closer than this are treated as tied.
inline constexpr double kOrderTieTolerance = 1e-6;

/// Orders the integer variables of `instance`.
///
///   Frac     ascending fractionality of the LP value (most integral first,
///            descending with fracDescending)
///   RedCost  descending |reduced cost|
///   Dual     rows by descending |dual|; each row appends its unlisted
///            integers by descending |reduced cost|; unlisted leftovers last
///   Type     binaries before general integers, index order inside groups
///   Random   seeded shuffle
///
/// Ties are broken by the tiebreaker key, then by index. Throws
/// std::invalid_argument when an LP-based strategy or tiebreaker is asked
/// for without an LP solution, or when strategy and tiebreaker coincide.
FixingOrder orderVariables(const MipInstance& instance, const LpSolution* lp,
                           VariableStrategy strategy, TieBreaker tiebreaker,
                           std::uint64_t seed, bool fracDescending = false);

/// LP-guided randomized fixing value: with v the LP value clamped into
/// [lower, upper] and d_i = v - floor(v), draws d ~ U(0,1) and returns
/// floor(v) if d > d_i, else ceil(v). Throws std::invalid_argument for an
/// empty domain.
double fixingValue(double lpValue, double lower, double upper, Rng& rng);

/// Branching bound changes for fixing value a on [lower, upper], in
/// increasing priority (the last entry is explored first).
///
/// Interior a yields [up, down, fix] for cost > 0 and [down, up, fix]
/// otherwise; a on a bound yields the two endpoint fixings with the one
/// equal to a last. When the opposite endpoint is infinite the restriction
/// away from a takes its place. Throws std::invalid_argument when a lies
/// outside the domain.
std::vector<BoundChange> branch(int var, double a, double lower, double upper,
                                double cost);

struct HeuristicConfig {
  VariableStrategy strategy = VariableStrategy::Frac;
  TieBreaker tiebreaker = TieBreaker::None;
  double initialLpTolerance = 1e-4;
  double finalLpTolerance = 1e-8;
  std::uint64_t seed = 0;
  std::int64_t backtrackLimit = 1000;
  /// 0 means 100 * |I|.
  std::int64_t nodeLimit = 0;
  /// Wall-clock seconds for the whole run.
  double timeLimit = kInf;
  bool fracDescending = false;
  /// Keep the node sequence in DfsResult::trace.
  bool recordTrace = false;
  /// Base settings for both LP solves; the tolerance is overridden.
  FolpConfig lp;
  PropagationConfig propagation;

  void validate() const;
};

enum class SearchOutcome {
  Found,
  RootInfeasible,
  Exhausted,
  NodeLimit,
  BacktrackLimit,
  TimeLimit
};

const char* toString(SearchOutcome o);

struct DfsResult {
  SearchOutcome outcome = SearchOutcome::Exhausted;
  bool found() const { return outcome == SearchOutcome::Found; }
  /// Full-length point: integers at their fixed values, continuous
  /// variables at their LP value clamped into the leaf domain.
  std::vector<double> assignment;
  std::vector<double> leafLower;
  std::vector<double> leafUpper;
  /// Bound changes from the root to the successful leaf.
  std::vector<BoundChange> path;
  /// Every applied bound change in visiting order (with recordTrace).
  std::vector<BoundChange> trace;
  std::int64_t nodes = 0;
  std::int64_t backtracks = 0;
  int maxDepth = 0;
};

/// Fix-and-propagate depth-first search over `order`.
DfsResult dfsSearch(const MipInstance& instance, const CliqueTable& cliques,
                    const FixingOrder& order, const LpSolution& lp,
                    const HeuristicConfig& config);

struct ComponentTimings {
  double reading = 0.0;
  double initialLp = 0.0;
  double fixAndPropagate = 0.0;
  double finalLp = 0.0;
  double total = 0.0;
};

struct RunReport {
  std::string instance;
  std::uint64_t permutationSeed = 0;
  std::string strategy;
  std::string tiebreaker;
  double initialLpTolerance = 0.0;
  double finalLpTolerance = 0.0;
  std::uint64_t seed = 0;

  bool found = false;
  /// "found", or the reason for aborting.
  std::string status;
  std::optional<double> objective;
  std::optional<double> gap;
  std::optional<double> reference;
  /// "given", "initial-lp" or "final-lp".
  std::string referenceKind;

  ComponentTimings timings;
  std::int64_t nodes = 0;
  std::int64_t backtracks = 0;
  std::int64_t initialLpIterations = 0;
  std::int64_t finalLpIterations = 0;
  std::string initialLpStatus;
  std::string finalLpStatus;
  double maxRowViolation = 0.0;
  double maxBoundViolation = 0.0;
  double maxIntegralityViolation = 0.0;

  /// Point of a found solution (not serialized).
  std::vector<double> solution;
};

/// Relative tolerance a solution must meet to be reported as found.
inline constexpr double kSolutionTolerance = 1e-6;

/// Initial LP, ordering, fix-and-propagate search, final LP over the fixed
/// integers, and a feasibility check of the combined point. `reference`
/// is in the instance's original objective sense; without one the gap is
/// taken against the initial LP objective.
RunReport runHeuristic(const MipInstance& instance,
                       const HeuristicConfig& config,
                       std::optional<double> reference = std::nullopt,
                       double readingSeconds = 0.0);

}  // namespace lpfap

#endif  // LPFAP_FIXPROP_HPP
