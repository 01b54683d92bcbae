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

#include <random>

#include "lpfap/model.hpp"
#include "lpfap/sparse_matrix.hpp"
#include "oracles.hpp"

using namespace lpfap;

TEST_CASE("sparse matrix views agree and duplicates are summed") {
  auto a = SparseMatrix::fromTriplets(
      2, 3, {{0, 0, 1.0}, {1, 2, 4.0}, {0, 2, 2.0}, {0, 0, 0.5}, {1, 1, 3.0}, {1, 1, -3.0}});
  CHECK(a.nnz() == 3);
  const auto r0 = a.row(0);
  REQUIRE(r0.size() == 2);
  CHECK(r0.index[0] == 0);
  CHECK(r0.value[0] == 1.5);
  CHECK(r0.index[1] == 2);
  CHECK(a.col(1).size() == 0);
  const auto c2 = a.col(2);
  REQUIRE(c2.size() == 2);
  CHECK(c2.index[0] == 0);
  CHECK(c2.value[1] == 4.0);

  std::vector<double> x{1, 2, 3}, ax(2);
  a.multiply(x, ax);
  CHECK(ax[0] == 1.5 + 6.0);
  CHECK(ax[1] == 12.0);
  std::vector<double> y{1, -1}, aty(3);
  a.multiplyTransposed(y, aty);
  CHECK(aty == std::vector<double>{1.5, 0.0, -2.0});

  CHECK_THROWS_AS(SparseMatrix::fromTriplets(1, 1, {{0, 1, 1.0}}), std::out_of_range);
  std::vector<double> wrong(2);
  CHECK_THROWS_AS(a.multiply(wrong, ax), std::invalid_argument);
}

TEST_CASE("random matrices: CSR and CSC encode the same entries") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<SparseMatrix::Triplet> t;
    for (int k = 0; k < 40; ++k)
      t.push_back({static_cast<int>(rng() % 9), static_cast<int>(rng() % 7),
                   static_cast<double>(rng() % 11) - 5.0});
    const auto a = SparseMatrix::fromTriplets(9, 7, t);
    std::vector<std::vector<double>> byRow(9, std::vector<double>(7, 0.0)), byCol = byRow;
    for (int i = 0; i < 9; ++i) {
      const auto r = a.row(i);
      for (std::size_t p = 0; p < r.size(); ++p) byRow[i][r.index[p]] = r.value[p];
    }
    for (int j = 0; j < 7; ++j) {
      const auto c = a.col(j);
      for (std::size_t p = 0; p < c.size(); ++p) byCol[c.index[p]][j] = c.value[p];
    }
    CHECK(byRow == byCol);
  }
}

TEST_CASE("finalizeInstance rounds integer bounds inward and rejects bad bounds") {
  auto inst = oracle::makeInstance({{1.0, 1.0}}, {1, 1}, {-kInf}, {3}, {0.3, -1.5},
                                   {2.7, 4.0}, {VarType::Integer, VarType::Continuous});
  CHECK(inst.colLower[0] == 1.0);
  CHECK(inst.colUpper[0] == 2.0);
  CHECK(inst.colLower[1] == -1.5);
  CHECK(inst.rowNames.size() == 1);
  CHECK(inst.colNames.size() == 2);

  CHECK_THROWS_AS(oracle::makeInstance({{1.0}}, {1}, {2}, {1}, {0}, {1}), InvalidInstance);
  CHECK_THROWS_AS(oracle::makeInstance({{1.0}}, {1}, {0}, {1}, {2}, {1}), InvalidInstance);
  // [0.2, 0.8] holds no integer
  CHECK_THROWS_AS(oracle::makeInstance({{1.0}}, {1}, {0}, {1}, {0.2}, {0.8},
                                       {VarType::Integer}),
                  InvalidInstance);
}

TEST_CASE("lpRelaxation drops integrality only and is idempotent") {
  auto inst = oracle::makeInstance({{1, 2, 3}}, {1, 2, 3}, {0}, {5}, {0, 0, 0}, {1, 4, 1},
                                   {VarType::Integer, VarType::Continuous, VarType::Integer});
  CHECK(inst.integerIndices() == std::vector<int>{0, 2});
  const auto relaxed = lpRelaxation(inst);
  CHECK(relaxed.integerIndices().empty());
  CHECK(relaxed.matrix == inst.matrix);
  CHECK(relaxed.objective == inst.objective);
  CHECK(relaxed.colLower == inst.colLower);
  CHECK(relaxed.colUpper == inst.colUpper);
  CHECK(lpRelaxation(relaxed) == relaxed);
  const auto pureLp = lpRelaxation(inst);
  CHECK(lpRelaxation(pureLp) == pureLp);
}

TEST_CASE("relaxation optimum bounds the knapsack optimum from below") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 4);
    auto member = oracle::knapsackFamilyMember(rng, n, rep % 2 == 1);
    const auto mip = oracle::bruteForceOptimum(member.instance);
    REQUIRE(mip);
    const auto lp = oracle::enumerateVertices(lpRelaxation(member.instance));
    REQUIRE(lp);
    CHECK(lp->objective <= mip->objective + 1e-9);
    CHECK(member.instance.externalObjective(mip->objective) ==
          doctest::Approx(member.optimum));
  }
}

TEST_CASE("checkFeasibility examples") {
  // x + y <= 1, x - y >= -1
  auto inst = oracle::makeInstance({{1, 1}, {1, -1}}, {-1, -1}, {-kInf, -1}, {1, kInf},
                                   {0, 0}, {1, 1}, {VarType::Integer, VarType::Continuous});
  SUBCASE("boundary point") {
    const std::vector<double> x{0.0, 1.0};
    const auto sol = checkFeasibility(inst, x, 0.0);
    CHECK(sol.feasible);
    CHECK(sol.maxRowViolation == 0.0);
    CHECK(sol.maxBoundViolation == 0.0);
    CHECK(sol.maxIntegralityViolation == 0.0);
    CHECK(sol.objective == -1.0);
  }
  SUBCASE("row violated by 1e-4 with bound 1") {
    const std::vector<double> x{0.0, 1.0001};
    const auto sol = checkFeasibility(inst, x, 1e-6);
    CHECK_FALSE(sol.feasible);
    CHECK(sol.maxRowViolation == doctest::Approx(1e-4 / 2).epsilon(1e-6));
  }
  SUBCASE("integrality violation is absolute") {
    const std::vector<double> x{0.25, 0.0};
    const auto sol = checkFeasibility(inst, x, 1e-6);
    CHECK_FALSE(sol.feasible);
    CHECK(sol.maxIntegralityViolation == doctest::Approx(0.25));
  }
  SUBCASE("dimension mismatch") {
    const std::vector<double> x{0.0};
    CHECK_THROWS_AS(checkFeasibility(inst, x, 1e-6), std::invalid_argument);
  }
}

TEST_CASE("vertex of a random LP is feasible at 1e-9") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto lp = oracle::randomBoxLp(rng, 3, 3);
    const auto best = oracle::enumerateVertices(lp);
    REQUIRE(best);
    CHECK(checkFeasibility(lp, best->x, 1e-9).feasible);
  }
}

TEST_CASE("checkFeasibility is monotone in the tolerance") {
  std::mt19937_64 rng(3);
  const auto lp = oracle::randomBoxLp(rng, 4, 4);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(4);
    for (double& v : x) v = d(rng);
    bool wasFeasible = false;
    for (double tol : {1e-9, 1e-6, 1e-3, 1e-1, 1.0, 10.0}) {
      const bool now = checkFeasibility(lp, x, tol).feasible;
      if (wasFeasible) CHECK(now);
      wasFeasible = now;
    }
  }
}

TEST_CASE("gapPercent examples and properties") {
  CHECK(gapPercent(100, 100) == 0.0);
  CHECK(gapPercent(102, 100) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gapPercent(0.5, 0) == kGapCap);
  CHECK(gapPercent(98, 100) == gapPercent(102, 100));
  CHECK(gapPercent(-102, -100) == doctest::Approx(2.0));
  for (double a : {-1e6, -3.5, 0.0, 1e-12, 7.0, 1e9}) CHECK(gapPercent(a, a) == 0.0);
}
