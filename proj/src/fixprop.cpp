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

#include "lpfap/fixprop.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpfap {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

const char* toString(VariableStrategy s) {
  switch (s) {
    case VariableStrategy::Frac: return "Frac";
    case VariableStrategy::RedCost: return "RedCost";
    case VariableStrategy::Dual: return "Dual";
    case VariableStrategy::Type: return "Type";
    case VariableStrategy::Random: return "Random";
  }
  return "Unknown";
}

const char* toString(TieBreaker t) {
  switch (t) {
    case TieBreaker::None: return "None";
    case TieBreaker::Frac: return "Frac";
    case TieBreaker::RedCost: return "RedCost";
    case TieBreaker::Dual: return "Dual";
  }
  return "Unknown";
}

VariableStrategy parseVariableStrategy(std::string_view name) {
  const std::string s = lower(name);
  if (s == "frac") return VariableStrategy::Frac;
  if (s == "redcost" || s == "redcosts") return VariableStrategy::RedCost;
  if (s == "dual" || s == "duals") return VariableStrategy::Dual;
  if (s == "type") return VariableStrategy::Type;
  if (s == "random") return VariableStrategy::Random;
  throw std::invalid_argument("unknown variable strategy '" + std::string(name) + "'");
}

TieBreaker parseTieBreaker(std::string_view name) {
  const std::string s = lower(name);
  if (s == "none") return TieBreaker::None;
  if (s == "frac") return TieBreaker::Frac;
  if (s == "redcost" || s == "redcosts") return TieBreaker::RedCost;
  if (s == "dual" || s == "duals") return TieBreaker::Dual;
  throw std::invalid_argument("unknown tiebreaker '" + std::string(name) + "'");
}

const char* toString(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Found: return "found";
    case SearchOutcome::RootInfeasible: return "root-infeasible";
    case SearchOutcome::Exhausted: return "exhausted";
    case SearchOutcome::NodeLimit: return "node-limit";
    case SearchOutcome::BacktrackLimit: return "backtrack-limit";
    case SearchOutcome::TimeLimit: return "time-limit";
  }
  return "unknown";
}

// ------------------------------------------------------------- ordering

namespace {

bool strategyMatches(VariableStrategy s, TieBreaker t) {
  return (s == VariableStrategy::Frac && t == TieBreaker::Frac) ||
         (s == VariableStrategy::RedCost && t == TieBreaker::RedCost) ||
         (s == VariableStrategy::Dual && t == TieBreaker::Dual);
}

double fractionality(double v) {
  return std::min(v - std::floor(v), std::ceil(v) - v);
}

// Sorts by `key` ascending; runs of keys within kOrderTieTolerance of the
// run's first key are re-sorted by `tie`, then by index.
void sortWithTies(std::vector<int>& vars, const std::vector<double>& key,
                  const std::vector<double>& tie) {
  std::sort(vars.begin(), vars.end(), [&](int a, int b) {
    return key[a] != key[b] ? key[a] < key[b] : a < b;
  });
  std::size_t start = 0;
  while (start < vars.size()) {
    std::size_t end = start + 1;
    while (end < vars.size() && key[vars[end]] - key[vars[start]] <= kOrderTieTolerance)
      ++end;
    std::sort(vars.begin() + start, vars.begin() + end, [&](int a, int b) {
      return tie[a] != tie[b] ? tie[a] < tie[b] : a < b;
    });
    start = end;
  }
}

std::vector<int> dualOrder(const MipInstance& inst, const LpSolution& lp,
                           const std::vector<int>& ints,
                           const std::vector<double>& tie) {
  const int n = inst.numCols();
  std::vector<double> negAbsRedCost(n, 0.0);
  for (int j : ints) negAbsRedCost[j] = -std::abs(lp.reducedCosts[j]);

  std::vector<int> rows(inst.numRows());
  std::iota(rows.begin(), rows.end(), 0);
  std::stable_sort(rows.begin(), rows.end(), [&](int a, int b) {
    return std::abs(lp.y[a]) > std::abs(lp.y[b]);
  });

  std::vector<char> listed(n, 0);
  std::vector<int> order;
  order.reserve(ints.size());
  std::vector<int> group;
  for (int i : rows) {
    group.clear();
    const auto row = inst.matrix.row(i);
    for (std::size_t p = 0; p < row.size(); ++p) {
      const int j = row.index[p];
      if (inst.isIntegral(j) && !listed[j]) {
        listed[j] = 1;
        group.push_back(j);
      }
    }
    sortWithTies(group, negAbsRedCost, tie);
    order.insert(order.end(), group.begin(), group.end());
  }
  group.clear();
  for (int j : ints)
    if (!listed[j]) group.push_back(j);
  sortWithTies(group, negAbsRedCost, tie);
  order.insert(order.end(), group.begin(), group.end());
  return order;
}

}  // namespace

FixingOrder orderVariables(const MipInstance& inst, const LpSolution* lp,
                           VariableStrategy strategy, TieBreaker tiebreaker,
                           std::uint64_t seed, bool fracDescending) {
  if (strategyMatches(strategy, tiebreaker))
    throw std::invalid_argument("strategy and tiebreaker must differ");
  const bool needsLp = strategy == VariableStrategy::Frac ||
                       strategy == VariableStrategy::RedCost ||
                       strategy == VariableStrategy::Dual ||
                       (strategy != VariableStrategy::Random &&
                        tiebreaker != TieBreaker::None);
  if (needsLp && lp == nullptr)
    throw std::invalid_argument(std::string("strategy ") + toString(strategy) +
                                "/" + toString(tiebreaker) + " needs an LP solution");
  if (lp && (lp->x.size() != static_cast<std::size_t>(inst.numCols()) ||
             lp->y.size() != static_cast<std::size_t>(inst.numRows()) ||
             lp->reducedCosts.size() != static_cast<std::size_t>(inst.numCols())))
    throw std::invalid_argument("LP solution does not match the instance");

  FixingOrder result;
  result.strategy = strategy;
  result.tiebreaker = tiebreaker;
  const std::vector<int> ints = inst.integerIndices();
  const int n = inst.numCols();
  result.vars = ints;

  if (strategy == VariableStrategy::Random) {
    Rng rng(seed);
    rng.shuffle(std::span<int>(result.vars));
    return result;
  }

  const std::vector<double> zero(n, 0.0);
  std::vector<double> tie(n, 0.0);
  switch (tiebreaker) {
    case TieBreaker::None: break;
    case TieBreaker::Frac:
      for (int j : ints) tie[j] = fractionality(lp->x[j]);
      break;
    case TieBreaker::RedCost:
      for (int j : ints) tie[j] = -std::abs(lp->reducedCosts[j]);
      break;
    case TieBreaker::Dual: {
      const auto order = dualOrder(inst, *lp, ints, zero);
      for (std::size_t k = 0; k < order.size(); ++k)
        tie[order[k]] = static_cast<double>(k);
      break;
    }
  }

  std::vector<double> key(n, 0.0);
  switch (strategy) {
    case VariableStrategy::Frac:
      for (int j : ints)
        key[j] = fracDescending ? -fractionality(lp->x[j]) : fractionality(lp->x[j]);
      break;
    case VariableStrategy::RedCost:
      for (int j : ints) key[j] = -std::abs(lp->reducedCosts[j]);
      break;
    case VariableStrategy::Type:
      for (int j : ints) key[j] = inst.isBinary(j) ? 0.0 : 1.0;
      break;
    case VariableStrategy::Dual:
      result.vars = dualOrder(inst, *lp, ints, tie);
      return result;
    case VariableStrategy::Random: break;
  }
  sortWithTies(result.vars, key, tie);
  return result;
}

// ------------------------------------------------------- fixing / branching

double fixingValue(double lpValue, double lower, double upper, Rng& rng) {
  if (!(lower <= upper))
    throw std::invalid_argument("fixingValue: empty domain");
  const double v = std::clamp(lpValue, lower, upper);
  const double down = std::floor(v);
  const double fractional = v - down;
  const double d = rng.uniform();
  const double a = d > fractional ? down : std::ceil(v);
  return std::clamp(a, lower, upper);
}

std::vector<BoundChange> branch(int var, double a, double lower, double upper,
                                double cost) {
  if (!(lower <= a && a <= upper))
    throw std::invalid_argument("branch: value " + std::to_string(a) +
                                " outside [" + std::to_string(lower) + ", " +
                                std::to_string(upper) + "]");
  if (lower == upper) return {{a, a, var}};
  if (lower < a && a < upper) {
    const BoundChange up{a + 1, upper, var};
    const BoundChange down{lower, a - 1, var};
    const BoundChange fix{a, a, var};
    if (cost > 0.0) return {up, down, fix};
    return {down, up, fix};
  }
  if (a == lower) {
    if (!std::isfinite(upper)) return {{a + 1, upper, var}, {a, a, var}};
    return {{upper, upper, var}, {lower, lower, var}};
  }
  if (!std::isfinite(lower)) return {{lower, a - 1, var}, {a, a, var}};
  return {{lower, lower, var}, {upper, upper, var}};
}

void HeuristicConfig::validate() const {
  if (strategyMatches(strategy, tiebreaker))
    throw std::invalid_argument("strategy and tiebreaker must differ");
  if (!(initialLpTolerance > 0.0) || !(finalLpTolerance > 0.0))
    throw std::invalid_argument("LP tolerances must be > 0");
  if (backtrackLimit <= 0) throw std::invalid_argument("backtrack limit must be > 0");
  if (nodeLimit < 0) throw std::invalid_argument("node limit must be >= 0");
  if (!(timeLimit > 0.0)) throw std::invalid_argument("time limit must be > 0");
}

// ------------------------------------------------------------------- DFS

namespace {

struct SearchNode {
  BoundChange change;
  int depth;
  std::size_t trailMark;
  // position in the order to resume from once the change is applied
  std::size_t resumeAt;
};

}  // namespace

DfsResult dfsSearch(const MipInstance& inst, const CliqueTable& cliques,
                    const FixingOrder& order, const LpSolution& lp,
                    const HeuristicConfig& config) {
  const auto start = Clock::now();
  const int n = inst.numCols();
  {
    std::vector<int> sorted = order.vars;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != inst.integerIndices())
      throw std::invalid_argument("fixing order is not a permutation of the integers");
  }
  if (lp.x.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("LP solution does not match the instance");

  const std::int64_t nodeLimit =
      config.nodeLimit > 0
          ? config.nodeLimit
          : 100 * std::max<std::int64_t>(1, static_cast<std::int64_t>(order.vars.size()));

  DfsResult result;
  Domain domain(inst);
  Propagator propagator(inst, cliques, config.propagation);
  Rng rng(config.seed);

  auto finishFound = [&](const std::vector<BoundChange>& path) {
    result.outcome = SearchOutcome::Found;
    result.path = path;
    result.leafLower = domain.lowers();
    result.leafUpper = domain.uppers();
    result.assignment.resize(n);
    for (int j = 0; j < n; ++j)
      result.assignment[j] = inst.isIntegral(j)
                                 ? domain.lower(j)
                                 : std::clamp(lp.x[j], domain.lower(j), domain.upper(j));
    return result;
  };

  if (propagator.propagateAll(domain).infeasible()) {
    result.outcome = SearchOutcome::RootInfeasible;
    return result;
  }

  auto nextFree = [&](std::size_t pos) {
    while (pos < order.vars.size() && domain.isFixed(order.vars[pos])) ++pos;
    return pos;
  };

  std::vector<SearchNode> stack;
  std::vector<BoundChange> path;
  auto expand = [&](std::size_t pos, int depth) {
    const int j = order.vars[pos];
    const double lo = domain.lower(j);
    const double hi = domain.upper(j);
    const double a = fixingValue(lp.x[j], lo, hi, rng);
    const std::size_t mark = domain.mark();
    for (const BoundChange& child : branch(j, a, lo, hi, inst.objective[j]))
      stack.push_back({child, depth + 1, mark, child.isFixing() ? pos + 1 : pos});
  };

  std::size_t pos = nextFree(0);
  if (pos == order.vars.size()) return finishFound(path);
  expand(pos, 0);

  while (!stack.empty()) {
    if (result.nodes >= nodeLimit) {
      result.outcome = SearchOutcome::NodeLimit;
      return result;
    }
    if (std::isfinite(config.timeLimit) && secondsSince(start) > config.timeLimit) {
      result.outcome = SearchOutcome::TimeLimit;
      return result;
    }
    const SearchNode node = stack.back();
    stack.pop_back();
    domain.undo(node.trailMark);
    path.resize(node.depth - 1);
    path.push_back(node.change);
    domain.setBounds(node.change.var, node.change.lower, node.change.upper);
    ++result.nodes;
    result.maxDepth = std::max(result.maxDepth, node.depth);
    if (config.recordTrace) result.trace.push_back(node.change);

    if (propagator.propagate(domain).infeasible()) {
      if (++result.backtracks >= config.backtrackLimit) {
        result.outcome = SearchOutcome::BacktrackLimit;
        return result;
      }
      continue;
    }
    pos = nextFree(node.resumeAt);
    if (pos == order.vars.size()) return finishFound(path);
    expand(pos, node.depth);
  }
  result.outcome = SearchOutcome::Exhausted;
  return result;
}

// ------------------------------------------------------------- full run

RunReport runHeuristic(const MipInstance& inst, const HeuristicConfig& config,
                       std::optional<double> reference, double readingSeconds) {
  config.validate();
  const auto start = Clock::now();
  RunReport report;
  report.instance = inst.name;
  report.strategy = toString(config.strategy);
  report.tiebreaker = toString(config.tiebreaker);
  report.initialLpTolerance = config.initialLpTolerance;
  report.finalLpTolerance = config.finalLpTolerance;
  report.seed = config.seed;
  report.timings.reading = readingSeconds;

  auto remaining = [&] { return config.timeLimit - secondsSince(start); };
  auto done = [&](std::string status) {
    report.status = std::move(status);
    report.timings.total = readingSeconds + secondsSince(start);
    return report;
  };

  const std::vector<int> ints = inst.integerIndices();
  const bool allFixed = std::all_of(ints.begin(), ints.end(), [&](int j) {
    return inst.colLower[j] == inst.colUpper[j];
  });

  std::vector<double> assignment(inst.colLower);
  std::optional<double> initialObjective;
  if (!allFixed) {
    FolpConfig lpConfig = config.lp;
    lpConfig.tolerance = config.initialLpTolerance;
    lpConfig.timeLimit = std::min(lpConfig.timeLimit, remaining());
    const auto lpStart = Clock::now();
    LpSolution initial;
    try {
      initial = pdhgSolve(lpRelaxation(inst), lpConfig);
    } catch (const NumericalError&) {
      report.timings.initialLp = secondsSince(lpStart);
      return done("initial-lp-numerical-error");
    }
    report.timings.initialLp = secondsSince(lpStart);
    report.initialLpIterations = initial.iterations;
    report.initialLpStatus = toString(initial.status);
    if (initial.status == LpStatus::PrimalInfeasibleGuess)
      return done("initial-lp-infeasible");
    initialObjective = inst.externalObjective(initial.primalObjective);

    const auto fpStart = Clock::now();
    const FixingOrder order =
        orderVariables(inst, &initial, config.strategy, config.tiebreaker,
                       config.seed, config.fracDescending);
    const CliqueTable cliques = buildCliqueTable(inst);
    HeuristicConfig searchConfig = config;
    searchConfig.timeLimit = std::max(remaining(), 1e-9);
    const DfsResult dfs = dfsSearch(inst, cliques, order, initial, searchConfig);
    report.timings.fixAndPropagate = secondsSince(fpStart);
    report.nodes = dfs.nodes;
    report.backtracks = dfs.backtracks;
    if (!dfs.found()) return done(std::string("search-") + toString(dfs.outcome));
    assignment = dfs.assignment;
  }

  MipInstance fixed = lpRelaxation(inst);
  for (int j : ints) fixed.colLower[j] = fixed.colUpper[j] = assignment[j];
  bool nothingFree = true;
  for (int j = 0; j < fixed.numCols(); ++j)
    nothingFree = nothingFree && fixed.colLower[j] == fixed.colUpper[j];

  std::vector<double> x;
  std::optional<double> finalObjective;
  const auto finalStart = Clock::now();
  if (nothingFree) {
    x = fixed.colLower;
    report.finalLpStatus = "skipped";
  } else {
    FolpConfig lpConfig = config.lp;
    lpConfig.tolerance = config.finalLpTolerance;
    lpConfig.timeLimit = std::min(lpConfig.timeLimit, std::max(remaining(), 1e-9));
    LpSolution final;
    try {
      final = pdhgSolve(fixed, lpConfig);
    } catch (const NumericalError&) {
      report.timings.finalLp = secondsSince(finalStart);
      return done("final-lp-numerical-error");
    }
    report.finalLpIterations = final.iterations;
    report.finalLpStatus = toString(final.status);
    if (final.status == LpStatus::PrimalInfeasibleGuess) {
      report.timings.finalLp = secondsSince(finalStart);
      return done("final-lp-infeasible");
    }
    x = final.x;
    for (int j : ints) x[j] = assignment[j];
  }
  report.timings.finalLp = secondsSince(finalStart);

  const MipSolution sol = checkFeasibility(inst, x, kSolutionTolerance);
  report.maxRowViolation = sol.maxRowViolation;
  report.maxBoundViolation = sol.maxBoundViolation;
  report.maxIntegralityViolation = sol.maxIntegralityViolation;
  if (!sol.feasible) return done("infeasible-solution");

  report.found = true;
  report.objective = inst.externalObjective(sol.objective);
  finalObjective = report.objective;
  if (reference) {
    report.reference = reference;
    report.referenceKind = "given";
  } else if (initialObjective) {
    report.reference = initialObjective;
    report.referenceKind = "initial-lp";
  } else {
    report.reference = finalObjective;
    report.referenceKind = "final-lp";
  }
  report.gap = gapPercent(*report.objective, *report.reference);
  report.solution = std::move(x);
  return done("found");
}

}  // namespace lpfap
