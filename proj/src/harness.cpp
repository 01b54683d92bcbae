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

#include "lpfap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "lpfap/mps.hpp"
#include "lpfap/random.hpp"

namespace lpfap {

std::optional<double> shiftedGeomean(std::span<const double> values,
                                     double shift) {
  if (!(shift > 0.0)) throw std::invalid_argument("shift must be > 0");
  if (values.empty()) return std::nullopt;
  double logSum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0))
      throw std::invalid_argument("shifted geometric mean of a negative value");
    logSum += std::log(v + shift);
  }
  return std::exp(logSum / static_cast<double>(values.size())) - shift;
}

MipInstance permuteInstance(const MipInstance& inst, std::uint64_t seed) {
  if (seed == 0) return inst;
  const int m = inst.numRows();
  const int n = inst.numCols();
  std::vector<int> rowPerm(m), colPerm(n);
  std::iota(rowPerm.begin(), rowPerm.end(), 0);
  std::iota(colPerm.begin(), colPerm.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<int>(rowPerm));
  rng.shuffle(std::span<int>(colPerm));

  // new position of each old index
  std::vector<int> rowTo(m), colTo(n);
  for (int k = 0; k < m; ++k) rowTo[rowPerm[k]] = k;
  for (int k = 0; k < n; ++k) colTo[colPerm[k]] = k;

  MipInstance out;
  out.name = inst.name;
  out.objectiveOffset = inst.objectiveOffset;
  out.maximize = inst.maximize;
  auto triplets = inst.matrix.triplets();
  for (auto& t : triplets) {
    t.row = rowTo[t.row];
    t.col = colTo[t.col];
  }
  out.matrix = SparseMatrix::fromTriplets(m, n, std::move(triplets));
  for (int k = 0; k < m; ++k) {
    out.rowLower.push_back(inst.rowLower[rowPerm[k]]);
    out.rowUpper.push_back(inst.rowUpper[rowPerm[k]]);
    out.rowNames.push_back(inst.rowNames[rowPerm[k]]);
  }
  for (int k = 0; k < n; ++k) {
    const int j = colPerm[k];
    out.objective.push_back(inst.objective[j]);
    out.colLower.push_back(inst.colLower[j]);
    out.colUpper.push_back(inst.colUpper[j]);
    out.varType.push_back(inst.varType[j]);
    out.colNames.push_back(inst.colNames[j]);
  }
  return out;
}

// ---------------------------------------------------------------- reports

nlohmann::ordered_json toJson(const RunReport& r, bool withTimings) {
  nlohmann::ordered_json j;
  j["instance"] = r.instance;
  j["permutation"] = r.permutationSeed;
  j["strategy"] = r.strategy;
  j["tiebreak"] = r.tiebreaker;
  j["init_tol"] = r.initialLpTolerance;
  j["final_tol"] = r.finalLpTolerance;
  j["seed"] = r.seed;
  j["found"] = r.found;
  j["status"] = r.status;
  if (r.objective) j["objective"] = *r.objective;
  if (r.gap) j["gap"] = *r.gap;
  if (r.reference) {
    j["reference"] = *r.reference;
    j["reference_kind"] = r.referenceKind;
  }
  j["nodes"] = r.nodes;
  j["backtracks"] = r.backtracks;
  j["initial_lp_iterations"] = r.initialLpIterations;
  j["final_lp_iterations"] = r.finalLpIterations;
  j["initial_lp_status"] = r.initialLpStatus;
  j["final_lp_status"] = r.finalLpStatus;
  j["max_row_violation"] = r.maxRowViolation;
  j["max_bound_violation"] = r.maxBoundViolation;
  j["max_integrality_violation"] = r.maxIntegralityViolation;
  if (withTimings) {
    j["timings"] = {{"reading", r.timings.reading},
                    {"initial_lp", r.timings.initialLp},
                    {"fix_and_propagate", r.timings.fixAndPropagate},
                    {"final_lp", r.timings.finalLp},
                    {"total", r.timings.total}};
  }
  return j;
}

RunReport reportFromJson(const nlohmann::json& j) {
  RunReport r;
  r.instance = j.at("instance").get<std::string>();
  r.permutationSeed = j.value("permutation", std::uint64_t{0});
  r.strategy = j.at("strategy").get<std::string>();
  r.tiebreaker = j.at("tiebreak").get<std::string>();
  r.initialLpTolerance = j.at("init_tol").get<double>();
  r.finalLpTolerance = j.at("final_tol").get<double>();
  r.seed = j.value("seed", std::uint64_t{0});
  r.found = j.at("found").get<bool>();
  r.status = j.value("status", std::string{});
  if (j.contains("objective")) r.objective = j["objective"].get<double>();
  if (j.contains("gap")) r.gap = j["gap"].get<double>();
  if (j.contains("reference")) {
    r.reference = j["reference"].get<double>();
    r.referenceKind = j.value("reference_kind", std::string{});
  }
  r.nodes = j.value("nodes", std::int64_t{0});
  r.backtracks = j.value("backtracks", std::int64_t{0});
  r.initialLpIterations = j.value("initial_lp_iterations", std::int64_t{0});
  r.finalLpIterations = j.value("final_lp_iterations", std::int64_t{0});
  r.initialLpStatus = j.value("initial_lp_status", std::string{});
  r.finalLpStatus = j.value("final_lp_status", std::string{});
  r.maxRowViolation = j.value("max_row_violation", 0.0);
  r.maxBoundViolation = j.value("max_bound_violation", 0.0);
  r.maxIntegralityViolation = j.value("max_integrality_violation", 0.0);
  if (j.contains("timings")) {
    const auto& t = j["timings"];
    r.timings.reading = t.value("reading", 0.0);
    r.timings.initialLp = t.value("initial_lp", 0.0);
    r.timings.fixAndPropagate = t.value("fix_and_propagate", 0.0);
    r.timings.finalLp = t.value("final_lp", 0.0);
    r.timings.total = t.value("total", 0.0);
  }
  return r;
}

namespace {

std::string formatG(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string formatFixed(const std::optional<double>& v) {
  if (!v) return "";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

// strict "better than" for the Best row: found, then gap, then time
bool betterRun(const RunReport& a, const RunReport& b) {
  if (a.found != b.found) return a.found;
  if (!a.found) return false;
  const double ga = a.gap.value_or(kGapCap);
  const double gb = b.gap.value_or(kGapCap);
  if (ga != gb) return ga < gb;
  return a.timings.total < b.timings.total;
}

AggregateRow summarize(std::string label, const std::vector<const RunReport*>& runs) {
  AggregateRow row;
  row.label = std::move(label);
  row.runs = static_cast<int>(runs.size());
  std::vector<double> gaps, times;
  for (const RunReport* r : runs) {
    if (!r->found) continue;
    ++row.found;
    gaps.push_back(r->gap.value_or(0.0));
    times.push_back(std::max(0.0, r->timings.total));
  }
  row.gap = shiftedGeomean(gaps, kGapShift);
  row.time = shiftedGeomean(times, kTimeShift);
  return row;
}

}  // namespace

std::string configLabel(const RunReport& r) {
  return r.strategy + "/" + r.tiebreaker + "/init=" + formatG(r.initialLpTolerance) +
         "/final=" + formatG(r.finalLpTolerance) + "/seed=" + std::to_string(r.seed);
}

std::vector<AggregateRow> aggregate(const std::vector<RunReport>& reports) {
  std::map<std::string, std::vector<const RunReport*>> byLabel;
  std::map<std::pair<std::string, std::uint64_t>, const RunReport*> best;
  for (const RunReport& r : reports) {
    byLabel[configLabel(r)].push_back(&r);
    auto key = std::make_pair(r.instance, r.permutationSeed);
    auto it = best.find(key);
    if (it == best.end())
      best.emplace(key, &r);
    else if (betterRun(r, *it->second))
      it->second = &r;
  }
  std::vector<AggregateRow> rows;
  for (const auto& [label, runs] : byLabel) rows.push_back(summarize(label, runs));
  std::vector<const RunReport*> bestRuns;
  for (const auto& [key, r] : best) bestRuns.push_back(r);
  rows.push_back(summarize("Best", bestRuns));
  return rows;
}

std::string aggregateCsv(const std::vector<AggregateRow>& rows) {
  std::string out = "label,runs,found,sgm_gap_percent,sgm_time_seconds\n";
  for (const AggregateRow& row : rows) {
    out += row.label + "," + std::to_string(row.runs) + "," +
           std::to_string(row.found) + "," + formatFixed(row.gap) + "," +
           formatFixed(row.time) + "\n";
  }
  return out;
}

std::vector<RunReport> parseJsonLines(std::string_view text) {
  std::vector<RunReport> out;
  std::size_t pos = 0;
  int lineNo = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(reportFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("JSON line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return out;
}

// ------------------------------------------------------------------ batch

namespace {

std::string trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> splitList(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    std::string item = trimmed(s.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(std::move(item));
    pos = comma + 1;
  }
  return out;
}

double toDouble(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("invalid number '" + s + "'");
  return v;
}

bool sameRule(VariableStrategy s, TieBreaker t) {
  return (s == VariableStrategy::Frac && t == TieBreaker::Frac) ||
         (s == VariableStrategy::RedCost && t == TieBreaker::RedCost) ||
         (s == VariableStrategy::Dual && t == TieBreaker::Dual);
}

}  // namespace

std::vector<HeuristicConfig> ConfigMatrix::expand() const {
  std::vector<HeuristicConfig> out;
  for (auto s : strategies)
    for (auto t : tiebreakers) {
      if (sameRule(s, t)) continue;
      for (double it : initialTolerances)
        for (double ft : finalTolerances)
          for (auto seed : seeds) {
            HeuristicConfig c;
            c.strategy = s;
            c.tiebreaker = t;
            c.initialLpTolerance = it;
            c.finalLpTolerance = ft;
            c.seed = seed;
            c.timeLimit = timeLimit;
            c.backtrackLimit = backtrackLimit;
            out.push_back(c);
          }
    }
  return out;
}

ConfigMatrix parseConfigMatrix(std::string_view text) {
  ConfigMatrix matrix;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trimmed(line).empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("config matrix line " + std::to_string(lineNo) + ": " + why);
    };
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trimmed(std::string_view(line).substr(0, eq));
    const auto values = splitList(std::string_view(line).substr(eq + 1));
    if (values.empty()) fail("empty value list for '" + key + "'");
    try {
      if (key == "strategy") {
        matrix.strategies.clear();
        for (const auto& v : values) matrix.strategies.push_back(parseVariableStrategy(v));
      } else if (key == "tiebreak") {
        matrix.tiebreakers.clear();
        for (const auto& v : values) matrix.tiebreakers.push_back(parseTieBreaker(v));
      } else if (key == "init_tol") {
        matrix.initialTolerances.clear();
        for (const auto& v : values) matrix.initialTolerances.push_back(toDouble(v));
      } else if (key == "final_tol") {
        matrix.finalTolerances.clear();
        for (const auto& v : values) matrix.finalTolerances.push_back(toDouble(v));
      } else if (key == "seed") {
        matrix.seeds.clear();
        for (const auto& v : values) matrix.seeds.push_back(std::stoull(v));
      } else if (key == "permutations") {
        matrix.permutations = std::stoi(values.at(0));
        if (matrix.permutations < 1) fail("permutations must be >= 1");
      } else if (key == "time_limit") {
        matrix.timeLimit = toDouble(values.at(0));
      } else if (key == "backtrack_limit") {
        matrix.backtrackLimit = std::stoll(values.at(0));
      } else if (key == "reference") {
        for (const auto& v : values) {
          const auto colon = v.rfind(':');
          if (colon == std::string::npos) fail("reference entries are name:value");
          matrix.references[trimmed(std::string_view(v).substr(0, colon))] =
              toDouble(trimmed(std::string_view(v).substr(colon + 1)));
        }
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      const std::string what = e.what();
      if (what.rfind("config matrix line", 0) == 0) throw;
      fail(what);
    } catch (const std::out_of_range&) {
      fail("value out of range");
    }
  }
  return matrix;
}

std::vector<std::string> discoverInstances(const std::string& directory) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    auto endsWith = [&](const std::string& s) {
      return name.size() > s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0;
    };
    if (endsWith(".mps") || endsWith(".mps.gz")) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

namespace {

struct BatchTask {
  std::string path;
  std::uint64_t permutation;
  HeuristicConfig config;
};

std::string instanceNameFromPath(const std::string& path) {
  std::string base = std::filesystem::path(path).filename().string();
  for (const std::string suffix : {".gz", ".mps"})
    if (base.size() > suffix.size() &&
        base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0)
      base.resize(base.size() - suffix.size());
  return base;
}

RunReport failedRun(const BatchTask& task, std::string status) {
  RunReport r;
  r.instance = instanceNameFromPath(task.path);
  r.permutationSeed = task.permutation;
  r.strategy = toString(task.config.strategy);
  r.tiebreaker = toString(task.config.tiebreaker);
  r.initialLpTolerance = task.config.initialLpTolerance;
  r.finalLpTolerance = task.config.finalLpTolerance;
  r.seed = task.config.seed;
  r.status = std::move(status);
  return r;
}

RunReport runTask(const BatchTask& task, const std::map<std::string, double>& references) {
  using Clock = std::chrono::steady_clock;
  const auto readStart = Clock::now();
  MipInstance inst;
  try {
    inst = readMpsFile(task.path);
  } catch (const std::exception& e) {
    return failedRun(task, std::string("read-error: ") + e.what());
  }
  inst.name = instanceNameFromPath(task.path);
  if (task.permutation != 0) inst = permuteInstance(inst, task.permutation);
  const double reading = std::chrono::duration<double>(Clock::now() - readStart).count();
  std::optional<double> reference;
  if (auto it = references.find(inst.name); it != references.end()) reference = it->second;
  try {
    RunReport r = runHeuristic(inst, task.config, reference, reading);
    r.permutationSeed = task.permutation;
    return r;
  } catch (const std::exception& e) {
    return failedRun(task, std::string("error: ") + e.what());
  }
}

}  // namespace

BatchSummary runBatch(const ConfigMatrix& matrix, const BatchOptions& options) {
  const auto files = discoverInstances(options.directory);
  const auto configs = matrix.expand();
  std::vector<BatchTask> tasks;
  for (const auto& file : files)
    for (int p = 0; p < matrix.permutations; ++p)
      for (const auto& config : configs)
        tasks.push_back({file, static_cast<std::uint64_t>(p), config});

  std::ofstream jsonl(options.jsonlPath, std::ios::binary | std::ios::trunc);
  if (!jsonl) throw std::runtime_error("cannot write '" + options.jsonlPath + "'");

  // Results are written in task order; finished tasks wait in `pending`
  // until every earlier task has been written.
  std::mutex mutex;
  std::vector<std::optional<std::string>> pending(tasks.size());
  std::size_t nextToWrite = 0;
  std::string allLines;
  BatchSummary summary;
  summary.runs = tasks.size();

  std::atomic<std::size_t> nextTask{0};
  auto worker = [&] {
    while (true) {
      const std::size_t k = nextTask.fetch_add(1);
      if (k >= tasks.size()) return;
      const RunReport r = runTask(tasks[k], matrix.references);
      std::string line = toJson(r, options.withTimings).dump() + "\n";
      std::lock_guard lock(mutex);
      if (r.found) ++summary.found;
      if (r.status.rfind("read-error", 0) == 0) ++summary.failedReads;
      pending[k] = std::move(line);
      while (nextToWrite < pending.size() && pending[nextToWrite]) {
        jsonl << *pending[nextToWrite];
        allLines += *pending[nextToWrite];
        pending[nextToWrite].reset();
        ++nextToWrite;
      }
      jsonl.flush();
    }
  };
  const int threads = std::max(1, options.threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!options.csvPath.empty()) {
    std::ofstream csv(options.csvPath, std::ios::binary | std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write '" + options.csvPath + "'");
    csv << aggregateCsv(aggregate(parseJsonLines(allLines)));
  }
  return summary;
}

}  // namespace lpfap
