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

#ifndef LPFAP_HARNESS_HPP
#define LPFAP_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lpfap/fixprop.hpp"
#include "lpfap/model.hpp"

namespace lpfap {

/// exp(mean(ln(v + shift))) - shift; nullopt for empty input.
/// Throws std::invalid_argument for negative values or shift <= 0.
std::optional<double> shiftedGeomean(std::span<const double> values,
                                     double shift);

/// Applies a seeded random permutation to rows and columns. Seed 0 is the
/// identity.
MipInstance permuteInstance(const MipInstance& instance, std::uint64_t seed);

// ---------------------------------------------------------------- reports

/// Stable JSON form of a run; key order is fixed. Timings are omitted when
/// `withTimings` is false so that reports can be compared byte for byte.
nlohmann::ordered_json toJson(const RunReport& report, bool withTimings = true);
RunReport reportFromJson(const nlohmann::json& j);

/// "strategy/tiebreak/init=../final=../seed=.." identifying the config.
std::string configLabel(const RunReport& report);

struct AggregateRow {
  std::string label;
  int runs = 0;
  int found = 0;
  /// Shifted geometric means over found runs (gap shift 1 percent, time
  /// shift 1 second).
  std::optional<double> gap;
  std::optional<double> time;
};

inline constexpr double kGapShift = 1.0;
inline constexpr double kTimeShift = 1.0;

/// One row per config label in lexicographic order, followed by a "Best"
/// row that takes, per (instance, permutation), the best run across configs
/// ordered by found, then gap, then total time.
std::vector<AggregateRow> aggregate(const std::vector<RunReport>& reports);

std::string aggregateCsv(const std::vector<AggregateRow>& rows);

/// Parses JSON-lines text (blank lines ignored).
std::vector<RunReport> parseJsonLines(std::string_view text);

// ------------------------------------------------------------------ batch

/// Cartesian config matrix read from a flat key-list file:
///
///   # comment
///   strategy        = Frac, RedCost
///   tiebreak        = None, Dual
///   init_tol        = 1e-4, 1e-6
///   final_tol       = 1e-8
///   seed            = 0, 1
///   permutations    = 5
///   time_limit      = 60
///   backtrack_limit = 1000
///   reference       = knap_01:-123.5, knap_02:-98
///
/// Strategy/tiebreak pairs naming the same rule are skipped.
struct ConfigMatrix {
  std::vector<VariableStrategy> strategies{VariableStrategy::Frac};
  std::vector<TieBreaker> tiebreakers{TieBreaker::None};
  std::vector<double> initialTolerances{1e-4};
  std::vector<double> finalTolerances{1e-8};
  std::vector<std::uint64_t> seeds{0};
  int permutations = 1;
  double timeLimit = kInf;
  std::int64_t backtrackLimit = 1000;
  std::map<std::string, double> references;

  std::vector<HeuristicConfig> expand() const;
};

/// Throws std::invalid_argument with the offending line number.
ConfigMatrix parseConfigMatrix(std::string_view text);

struct BatchOptions {
  std::string directory;
  std::string jsonlPath;
  std::string csvPath;
  int threads = 1;
  bool withTimings = true;
};

struct BatchSummary {
  std::size_t runs = 0;
  std::size_t found = 0;
  std::size_t failedReads = 0;
};

/// Instance files (*.mps, *.mps.gz) of a directory in name order.
std::vector<std::string> discoverInstances(const std::string& directory);

/// Runs every (instance, permutation, config) triple, writing JSON lines in
/// task order as results arrive and the aggregate CSV at the end.
BatchSummary runBatch(const ConfigMatrix& matrix, const BatchOptions& options);

}  // namespace lpfap

#endif  // LPFAP_HARNESS_HPP
