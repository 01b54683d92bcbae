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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lpfap/folp.hpp"
#include "oracles.hpp"

using namespace lpfap;

namespace {

FolpConfig withTolerance(double tol) {
  FolpConfig c;
  c.tolerance = tol;
  return c;
}

double relativeError(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

TEST_CASE("hand-solvable LP") {
  // min -x - y  s.t.  x + y <= 1,  x, y in [0, 1]
  const auto inst = oracle::makeInstance({{1, 1}}, {-1, -1}, {-kInf}, {1}, {0, 0}, {1, 1});
  const auto sol = pdhgSolve(inst, withTolerance(1e-6));
  CHECK(sol.status == LpStatus::Optimal);
  CHECK(sol.primalObjective == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(sol.residuals.within(1e-6));
}

TEST_CASE("equality system with a unique feasible point") {
  const auto inst = oracle::makeInstance({{1, 1, 0}, {1, -1, 0}, {0, 1, 1}}, {1, 2, 3},
                                         {3, 1, 2}, {3, 1, 2}, {-10, -10, -10}, {10, 10, 10});
  const auto sol = pdhgSolve(inst, withTolerance(1e-8));
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sol.x[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.x[2] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.residuals.gap <= 1e-8);
}

TEST_CASE("random box LPs match the vertex enumeration oracle") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 15; ++rep) {
    const int m = 2 + rep % 5;
    const int n = 2 + (rep * 3) % 5;
    const auto lp = oracle::randomBoxLp(rng, m, n);
    const auto best = oracle::enumerateVertices(lp);
    REQUIRE(best);
    const auto sol = pdhgSolve(lp, withTolerance(1e-6));
    INFO("rep " << rep << " m=" << m << " n=" << n);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(relativeError(sol.primalObjective, best->objective) <= 1e-4);
    const Residuals again = computeResiduals(lp, sol.x, sol.y);
    CHECK(again.within(1e-6));
  }
}

TEST_CASE("20x20 LPs with a certified optimum") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    const auto known = oracle::knownOptimumLp(rng, 20, 20);
    const auto r = computeResiduals(known.instance, known.x, known.y);
    CHECK(r.within(1e-12));
    const auto sol = pdhgSolve(known.instance, withTolerance(1e-6));
    INFO("rep " << rep);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(relativeError(sol.primalObjective, known.objective) <= 1e-4);
  }
}

TEST_CASE("solves are bit-identical when repeated") {
  std::mt19937_64 rng(4);
  const auto lp = oracle::randomBoxLp(rng, 6, 6);
  const auto a = pdhgSolve(lp, withTolerance(1e-7));
  const auto b = pdhgSolve(lp, withTolerance(1e-7));
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.iterations == b.iterations);
  CHECK(a.restartMeasures == b.restartMeasures);
}

TEST_CASE("termination is monotone in the tolerance") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const auto lp = oracle::randomBoxLp(rng, 5, 5);
    for (double tol : {1e-6, 1e-4}) {
      const auto sol = pdhgSolve(lp, withTolerance(tol));
      REQUIRE(sol.status == LpStatus::Optimal);
      for (double looser : {tol, tol * 10, tol * 1000}) CHECK(sol.residuals.within(looser));
    }
    CHECK(pdhgSolve(lp, withTolerance(1e-4)).iterations <=
          pdhgSolve(lp, withTolerance(1e-6)).iterations);
  }
}

TEST_CASE("objective scaling keeps termination within a 10x bracket") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    auto lp = oracle::randomBoxLp(rng, 5, 6);
    const double tol = 1e-5;
    const auto sol = pdhgSolve(lp, withTolerance(tol));
    REQUIRE(sol.status == LpStatus::Optimal);
    for (double alpha : {0.5, 2.0, 10.0}) {
      auto scaled = lp;
      for (double& c : scaled.objective) c *= alpha;
      std::vector<double> y = sol.y;
      for (double& v : y) v *= alpha;
      CHECK(computeResiduals(scaled, sol.x, y).within(10 * tol));
    }
  }
}

TEST_CASE("restart measures never increase") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const auto lp = oracle::randomBoxLp(rng, 7, 7);
    const auto sol = pdhgSolve(lp, withTolerance(1e-8));
    for (std::size_t k = 1; k < sol.restartMeasures.size(); ++k)
      CHECK(sol.restartMeasures[k] <= sol.restartMeasures[k - 1]);
  }
}

TEST_CASE("status is Optimal only within tolerance; limits surface as statuses") {
  std::mt19937_64 rng(6);
  const auto lp = oracle::randomBoxLp(rng, 6, 6);
  FolpConfig c = withTolerance(1e-9);
  c.maxIterations = 10;
  const auto sol = pdhgSolve(lp, c);
  CHECK(sol.status == LpStatus::IterLimit);
  CHECK(sol.iterations == 10);
  FolpConfig bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(pdhgSolve(lp, bad), std::invalid_argument);
}

TEST_CASE("infeasible LP is flagged as a guess or runs into a limit") {
  // x >= 2 and x <= 1 with free x
  const auto inst =
      oracle::makeInstance({{1}, {1}}, {1}, {2, -kInf}, {kInf, 1}, {-kInf}, {kInf});
  FolpConfig c = withTolerance(1e-6);
  c.maxIterations = 200000;
  const auto sol = pdhgSolve(inst, c);
  CHECK(sol.status != LpStatus::Optimal);
}

TEST_CASE("iteration log is structured") {
  const auto inst = oracle::makeInstance({{1, 1}}, {-1, -1}, {-kInf}, {1}, {0, 0}, {1, 1});
  std::ostringstream log;
  FolpConfig c = withTolerance(1e-6);
  c.log = &log;
  pdhgSolve(inst, c);
  CHECK(log.str().rfind("folp iter=0 pres=", 0) == 0);
}

TEST_CASE("residuals at a verified optimal vertex are zero") {
  // min -x - 2y  s.t. x + y <= 4, x + 3y <= 6, x, y in [0, 10]
  // optimum (3, 1) with duals y = (-0.5, -0.5)
  const auto inst =
      oracle::makeInstance({{1, 1}, {1, 3}}, {-1, -2}, {-kInf, -kInf}, {4, 6}, {0, 0}, {10, 10});
  const std::vector<double> x{3, 1}, y{-0.5, -0.5};
  const auto r = computeResiduals(inst, x, y);
  CHECK(r.primal <= 1e-12);
  CHECK(r.dual <= 1e-12);
  CHECK(r.gap <= 1e-12);
  CHECK(dualObjective(inst, y) == doctest::Approx(-5.0));
}

TEST_CASE("dual residual by hand with y = 0") {
  // min x - y, x in [0, inf), y in (-inf, 5]: z absorbs r_x = 1 (>= 0, lower
  // finite) and r_y = -1 (<= 0, upper finite); swap signs and nothing is
  // absorbed.
  const auto inst = oracle::makeInstance({{1, 1}}, {1, -1}, {-kInf}, {10}, {0, -kInf}, {kInf, 5});
  const std::vector<double> x{1, 1}, y{0};
  CHECK(computeResiduals(inst, x, y).dual == 0.0);
  const auto flipped =
      oracle::makeInstance({{1, 1}}, {-1, 1}, {-kInf}, {10}, {0, -kInf}, {kInf, 5});
  CHECK(computeResiduals(flipped, x, y).dual ==
        doctest::Approx(std::sqrt(2.0) / (1.0 + std::sqrt(2.0))));
  std::vector<double> shortY;
  CHECK_THROWS_AS(computeResiduals(inst, x, shortY), std::invalid_argument);
}

TEST_CASE("primal residual grows linearly along a violated direction") {
  const auto inst =
      oracle::makeInstance({{1, 1}, {1, 3}}, {-1, -2}, {-kInf, -kInf}, {4, 6}, {0, 0}, {10, 10});
  const std::vector<double> y{-0.5, -0.5};
  std::vector<double> slopes;
  for (double delta : {1e-3, 2e-3, 4e-3}) {
    const std::vector<double> x{3 + delta, 1 + delta};
    slopes.push_back(computeResiduals(inst, x, y).primal / delta);
  }
  // ||(2, 4)|| / (1 + ||(4, 6)||)
  const double expected = std::sqrt(20.0) / (1.0 + std::sqrt(52.0));
  for (double s : slopes) CHECK(s == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("reduced costs") {
  const auto inst = oracle::makeInstance({{2, -1, 0}}, {1, 2, 3}, {-kInf}, {1}, {0, 0, 0},
                                         {1, 1, 1});
  const std::vector<double> zero{0.0};
  CHECK(reducedCosts(inst, zero) == std::vector<double>{1, 2, 3});
  const std::vector<double> y{0.5};
  CHECK(reducedCosts(inst, y) == std::vector<double>{0.0, 2.5, 3.0});
  const std::vector<double> wrong{1.0, 2.0};
  CHECK_THROWS_AS(reducedCosts(inst, wrong), std::invalid_argument);
}

TEST_CASE("reduced cost signs match active bounds at the optimum") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto lp = oracle::randomBoxLp(rng, 3, 4);
    const auto best = oracle::enumerateVertices(lp);
    REQUIRE(best);
    const auto sol = pdhgSolve(lp, withTolerance(1e-9));
    REQUIRE(sol.status == LpStatus::Optimal);
    // nondegenerate in the sense that the solver's x is the oracle vertex
    bool same = true;
    for (int j = 0; j < lp.numCols(); ++j) same = same && std::abs(sol.x[j] - best->x[j]) < 1e-5;
    if (!same) continue;
    ++checked;
    const auto r = reducedCosts(lp, sol.y);
    for (int j = 0; j < lp.numCols(); ++j) {
      const bool atLower = std::abs(best->x[j] - lp.colLower[j]) < 1e-7;
      const bool atUpper = std::abs(best->x[j] - lp.colUpper[j]) < 1e-7;
      if (atLower && !atUpper) CHECK(r[j] >= -1e-6);
      if (atUpper && !atLower) CHECK(r[j] <= 1e-6);
      if (!atLower && !atUpper) CHECK(std::abs(r[j]) <= 1e-6);
    }
  }
  CHECK(checked >= 10);
}
