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

// Command line front end.
//
//   lpfap solve <file.mps[.gz]>   one instance, one config, JSON report
//   lpfap batch <dir>             config matrix over a directory, JSONL + CSV
//   lpfap aggregate <file.jsonl>  JSONL reports to aggregate CSV
//   lpfap lp <file.mps[.gz]>      LP relaxation only
//
// Exit codes: 0 solved, 1 no solution, 2 input error.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lpfap/fixprop.hpp"
#include "lpfap/folp.hpp"
#include "lpfap/harness.hpp"
#include "lpfap/mps.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitNoSolution = 1;
constexpr int kExitInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void writeText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::string readText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SolveFlags {
  std::string file;
  std::string strategy = "Frac";
  std::string tiebreak = "None";
  double initTol = 1e-4;
  double finalTol = 1e-8;
  std::uint64_t seed = 0;
  std::uint64_t permute = 0;
  int permutations = 1;
  int threads = 1;
  double timeLimit = lpfap::kInf;
  std::int64_t backtrackLimit = 1000;
  std::optional<double> reference;
  std::string output;
  std::string solution;
  bool noTimings = false;
  bool fracDescending = false;
};

int runSolve(const SolveFlags& f) {
  using Clock = std::chrono::steady_clock;
  lpfap::HeuristicConfig config;
  config.strategy = lpfap::parseVariableStrategy(f.strategy);
  config.tiebreaker = lpfap::parseTieBreaker(f.tiebreak);
  config.initialLpTolerance = f.initTol;
  config.finalLpTolerance = f.finalTol;
  config.seed = f.seed;
  config.timeLimit = f.timeLimit;
  config.backtrackLimit = f.backtrackLimit;
  config.fracDescending = f.fracDescending;
  config.validate();

  if (f.permutations < 1) throw InputError("--permutations must be >= 1");
  if (f.permutations > 1 && f.permute != 0)
    throw InputError("--permute and --permutations are exclusive");
  if (f.permutations > 1 && !f.solution.empty())
    throw InputError("--solution needs a single run");

  const auto start = Clock::now();
  const lpfap::MipInstance original = lpfap::readMpsFile(f.file);
  const double reading = std::chrono::duration<double>(Clock::now() - start).count();

  // One run per permutation seed: the given one, or 0 .. permutations-1 as
  // in batch mode. Runs are independent and reported in seed order.
  std::vector<std::uint64_t> seeds;
  if (f.permutations == 1)
    seeds.push_back(f.permute);
  else
    for (int p = 0; p < f.permutations; ++p) seeds.push_back(static_cast<std::uint64_t>(p));
  std::vector<lpfap::RunReport> reports(seeds.size());
  std::vector<lpfap::MipInstance> instances(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < seeds.size();) {
      const auto permStart = Clock::now();
      instances[k] = seeds[k] == 0 ? original : lpfap::permuteInstance(original, seeds[k]);
      const double permuting = std::chrono::duration<double>(Clock::now() - permStart).count();
      reports[k] = lpfap::runHeuristic(instances[k], config, f.reference, reading + permuting);
      reports[k].permutationSeed = seeds[k];
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(f.threads, static_cast<int>(seeds.size())); ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string lines;
  bool found = false;
  for (const auto& r : reports) {
    lines += lpfap::toJson(r, !f.noTimings).dump() + "\n";
    found = found || r.found;
  }
  writeText(f.output, lines);

  const auto& report = reports.front();
  if (!f.solution.empty() && report.found) {
    const auto& inst = instances.front();
    std::ostringstream sol;
    sol << std::setprecision(17);
    for (int j = 0; j < inst.numCols(); ++j)
      sol << inst.colNames[j] << ' ' << report.solution[j] << '\n';
    writeText(f.solution, sol.str());
  }
  return found ? kExitSolved : kExitNoSolution;
}

struct BatchFlags {
  std::string directory;
  std::string configFile;
  std::string output = "results.jsonl";
  std::string csv;
  int threads = 1;
  bool noTimings = false;
  // Optional overrides of the config matrix.
  std::string strategy;
  std::string tiebreak;
  std::optional<double> initTol;
  std::optional<double> finalTol;
  std::optional<std::uint64_t> seed;
  std::optional<int> permutations;
  std::optional<double> timeLimit;
  std::optional<std::int64_t> backtrackLimit;
};

int runBatchCommand(const BatchFlags& f) {
  lpfap::ConfigMatrix matrix;
  if (!f.configFile.empty()) matrix = lpfap::parseConfigMatrix(readText(f.configFile));
  if (!f.strategy.empty())
    matrix.strategies = {lpfap::parseVariableStrategy(f.strategy)};
  if (!f.tiebreak.empty()) matrix.tiebreakers = {lpfap::parseTieBreaker(f.tiebreak)};
  if (f.initTol) matrix.initialTolerances = {*f.initTol};
  if (f.finalTol) matrix.finalTolerances = {*f.finalTol};
  if (f.seed) matrix.seeds = {*f.seed};
  if (f.permutations) {
    if (*f.permutations < 1) throw InputError("--permutations must be >= 1");
    matrix.permutations = *f.permutations;
  }
  if (f.timeLimit) matrix.timeLimit = *f.timeLimit;
  if (f.backtrackLimit) matrix.backtrackLimit = *f.backtrackLimit;
  for (const auto& config : matrix.expand()) config.validate();

  lpfap::BatchOptions options;
  options.directory = f.directory;
  options.jsonlPath = f.output;
  options.csvPath = f.csv;
  if (options.csvPath.empty()) {
    std::string base = f.output;
    if (base.size() > 6 && base.compare(base.size() - 6, 6, ".jsonl") == 0)
      base.resize(base.size() - 6);
    options.csvPath = base + ".csv";
  }
  options.threads = f.threads;
  options.withTimings = !f.noTimings;
  const auto summary = lpfap::runBatch(matrix, options);
  std::cerr << "batch runs=" << summary.runs << " found=" << summary.found
            << " failed_reads=" << summary.failedReads << "\n";
  if (summary.runs == 0) throw InputError("no instances in '" + f.directory + "'");
  return summary.found > 0 ? kExitSolved : kExitNoSolution;
}

int runAggregate(const std::string& input, const std::string& output) {
  const auto reports = lpfap::parseJsonLines(readText(input));
  writeText(output, lpfap::aggregateCsv(lpfap::aggregate(reports)));
  return kExitSolved;
}

struct LpFlags {
  std::string file;
  double tolerance = 1e-4;
  double timeLimit = lpfap::kInf;
  std::int64_t maxIterations = 1'000'000;
  std::string output;
  bool verbose = false;
};

int runLp(const LpFlags& f) {
  lpfap::FolpConfig config;
  config.tolerance = f.tolerance;
  config.timeLimit = f.timeLimit;
  config.maxIterations = f.maxIterations;
  if (f.verbose) config.log = &std::cerr;
  config.validate();
  const lpfap::MipInstance inst = lpfap::readMpsFile(f.file);
  const auto solution = lpfap::pdhgSolve(lpfap::lpRelaxation(inst), config);
  nlohmann::ordered_json j;
  j["instance"] = inst.name;
  j["status"] = lpfap::toString(solution.status);
  j["objective"] = inst.externalObjective(solution.primalObjective);
  j["dual_objective"] = inst.externalObjective(solution.dualObjective);
  j["iterations"] = solution.iterations;
  j["restarts"] = solution.restartMeasures.size();
  j["primal_residual"] = solution.residuals.primal;
  j["dual_residual"] = solution.residuals.dual;
  j["gap_residual"] = solution.residuals.gap;
  writeText(f.output, j.dump() + "\n");
  return solution.status == lpfap::LpStatus::Optimal ? kExitSolved : kExitNoSolution;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP-guided fix-and-propagate primal heuristic"};
  app.require_subcommand(1);

  SolveFlags solve;
  auto* solveCmd = app.add_subcommand("solve", "Run the heuristic on one instance");
  solveCmd->add_option("file", solve.file, "MPS file (optionally gzipped)")->required();
  solveCmd->add_option("--strategy", solve.strategy,
                       "Frac, RedCost, Dual, Type or Random");
  solveCmd->add_option("--tiebreak", solve.tiebreak, "None, Frac, RedCost or Dual");
  solveCmd->add_option("--init-tol", solve.initTol, "Initial LP tolerance");
  solveCmd->add_option("--final-tol", solve.finalTol, "Final LP tolerance");
  solveCmd->add_option("--seed", solve.seed, "Random seed of the fixing rule");
  solveCmd->add_option("--permute", solve.permute,
                       "Permutation seed applied to the instance (0 = none)");
  solveCmd->add_option("--permutations", solve.permutations,
                       "Run on permutation seeds 0 .. N-1, one report line each");
  solveCmd->add_option("--threads", solve.threads, "Parallel runs over permutations")
      ->check(CLI::PositiveNumber);
  solveCmd->add_option("--time-limit", solve.timeLimit, "Seconds");
  solveCmd->add_option("--backtrack-limit", solve.backtrackLimit, "Backtracks");
  solveCmd->add_option("--reference", solve.reference,
                       "Reference objective for the gap");
  solveCmd->add_flag("--frac-descending", solve.fracDescending,
                     "Most fractional variables first under Frac");
  solveCmd->add_option("--output", solve.output, "Report path (default stdout)");
  solveCmd->add_option("--solution", solve.solution, "Write 'name value' lines");
  solveCmd->add_flag("--no-timings", solve.noTimings, "Omit timings from the report");

  BatchFlags batch;
  auto* batchCmd = app.add_subcommand("batch", "Run a config matrix over a directory");
  batchCmd->add_option("directory", batch.directory, "Directory of MPS files")->required();
  batchCmd->add_option("--config", batch.configFile, "Config matrix file");
  batchCmd->add_option("--output", batch.output, "JSON-lines output path");
  batchCmd->add_option("--csv", batch.csv, "Aggregate CSV path");
  batchCmd->add_option("--threads", batch.threads, "Parallel runs")->check(CLI::PositiveNumber);
  batchCmd->add_flag("--no-timings", batch.noTimings, "Omit timings from reports");
  batchCmd->add_option("--strategy", batch.strategy, "Override strategies");
  batchCmd->add_option("--tiebreak", batch.tiebreak, "Override tiebreakers");
  batchCmd->add_option("--init-tol", batch.initTol, "Override initial LP tolerance");
  batchCmd->add_option("--final-tol", batch.finalTol, "Override final LP tolerance");
  batchCmd->add_option("--seed", batch.seed, "Override seeds");
  batchCmd->add_option("--permutations", batch.permutations, "Permutations per instance");
  batchCmd->add_option("--time-limit", batch.timeLimit, "Seconds per run");
  batchCmd->add_option("--backtrack-limit", batch.backtrackLimit, "Backtracks per run");

  std::string aggInput, aggOutput;
  auto* aggCmd = app.add_subcommand("aggregate", "Aggregate JSON-lines reports to CSV");
  aggCmd->add_option("file", aggInput, "JSON-lines reports")->required();
  aggCmd->add_option("--output", aggOutput, "CSV path (default stdout)");

  LpFlags lp;
  auto* lpCmd = app.add_subcommand("lp", "Solve the LP relaxation only");
  lpCmd->add_option("file", lp.file, "MPS file (optionally gzipped)")->required();
  lpCmd->add_option("--tol,--init-tol", lp.tolerance, "Relative tolerance");
  lpCmd->add_option("--time-limit", lp.timeLimit, "Seconds");
  lpCmd->add_option("--max-iterations", lp.maxIterations, "Iteration limit");
  lpCmd->add_option("--output", lp.output, "Report path (default stdout)");
  lpCmd->add_flag("--verbose", lp.verbose, "Iteration log on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*solveCmd) return runSolve(solve);
    if (*batchCmd) return runBatchCommand(batch);
    if (*aggCmd) return runAggregate(aggInput, aggOutput);
    if (*lpCmd) return runLp(lp);
  } catch (const lpfap::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoSolution;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
