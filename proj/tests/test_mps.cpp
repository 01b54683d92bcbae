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


#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "lpfap/mps.hpp"
#include "oracles.hpp"

using namespace lpfap;

namespace {

// Kind name of the error raised while parsing `text`.
std::string errorKind(const std::string& text, int* line = nullptr) {
  try {
    parseMps(text);
  } catch (const MpsError& e) {
    if (line) *line = e.line();
    return toString(e.kind());
  }
  FAIL("expected an MpsError");
  return {};
}

const char* kSmall = R"(NAME small
ROWS
 N obj
 L c1
COLUMNS
    x obj -1 c1 1
    y obj -1 c1 1
RHS
    rhs c1 1
BOUNDS
 UP bnd x 1
 UP bnd y 1
ENDATA
)";

}  // namespace

TEST_CASE("one-row example transcribes directly") {
  const auto inst = parseMps(kSmall);
  CHECK(inst.name == "small");
  CHECK(inst.numRows() == 1);
  CHECK(inst.numCols() == 2);
  CHECK(inst.rowLower[0] == -kInf);
  CHECK(inst.rowUpper[0] == 1.0);
  CHECK(inst.objective == std::vector<double>{-1, -1});
  CHECK(inst.colLower == std::vector<double>{0, 0});
  CHECK(inst.colUpper == std::vector<double>{1, 1});
  CHECK(inst.integerIndices().empty());
  CHECK_FALSE(inst.maximize);
}

TEST_CASE("integer markers and bound types") {
  const auto inst = parseMps(R"(NAME ints
ROWS
 N obj
 E e1
 G g1
COLUMNS
    a obj 1 e1 1
    MARKER 'MARKER' 'INTORG'
    x obj 2 e1 1
    x g1 3
    MARKER 'MARKER' 'INTEND'
    b obj 1 g1 1
    c obj 1 g1 1
    d obj 1 g1 1
    f obj 1 g1 1
RHS
    rhs e1 4 g1 2
BOUNDS
 UP bnd x 7.5
 BV bnd b
 LI bnd c -2
 UI bnd c 3
 FR bnd d
 MI bnd f
ENDATA
)");
  CHECK(inst.integerIndices() == std::vector<int>{1, 2, 3});
  CHECK(inst.colUpper[1] == 7.0);
  CHECK(inst.isBinary(2));
  CHECK(inst.colLower[3] == -2.0);
  CHECK(inst.colUpper[3] == 3.0);
  CHECK(inst.colLower[4] == -kInf);
  CHECK(inst.colUpper[4] == kInf);
  CHECK(inst.colLower[5] == -kInf);
  CHECK(inst.colUpper[5] == kInf);
  CHECK(inst.rowLower[0] == 4.0);
  CHECK(inst.rowUpper[0] == 4.0);
  CHECK(inst.rowLower[1] == 2.0);
  CHECK(inst.rowUpper[1] == kInf);
}

TEST_CASE("unquoted markers are accepted") {
  const auto inst = parseMps(R"(NAME m
ROWS
 N obj
 L c
COLUMNS
    MARKER MARKER INTORG
    x obj 1 c 1
    MARKER MARKER INTEND
    y obj 1 c 1
RHS
    rhs c 1
ENDATA
)");
  CHECK(inst.integerIndices() == std::vector<int>{0});
}

TEST_CASE("ranges, objective sense, offset and duplicate entries") {
  const auto inst = parseMps(R"(NAME r
OBJSENSE
    MAX
ROWS
 N obj
 L le
 G ge
 E eqp
 E eqn
 N spare
COLUMNS
    x obj 3 le 1
    x ge 1 eqp 1
    x eqn 1 spare 1
    x le 1
    y obj 1 le 2
RHS
    rhs obj 10 le 4
    rhs ge 1 eqp 2
    rhs eqn 2
RANGES
    rng le 1.5 ge 2
    rng eqp 3 eqn -3
ENDATA
)");
  CHECK(inst.maximize);
  CHECK(inst.objective == std::vector<double>{-3, -1});
  CHECK(inst.externalObjective(inst.evaluate(std::vector<double>{1, 1})) ==
        doctest::Approx(3 + 1 - 10));
  CHECK(inst.numRows() == 5);
  CHECK(inst.rowLower[0] == 2.5);
  CHECK(inst.rowUpper[0] == 4.0);
  CHECK(inst.rowLower[1] == 1.0);
  CHECK(inst.rowUpper[1] == 3.0);
  CHECK(inst.rowLower[2] == 2.0);
  CHECK(inst.rowUpper[2] == 5.0);
  CHECK(inst.rowLower[3] == -1.0);
  CHECK(inst.rowUpper[3] == 2.0);
  CHECK(inst.rowLower[4] == -kInf);
  CHECK(inst.rowUpper[4] == kInf);
  // duplicate x/le entry summed
  CHECK(inst.matrix.row(0).value[0] == 2.0);
}

TEST_CASE("negative UP on a default lower bound frees the lower side") {
  const auto inst = parseMps(R"(NAME n
ROWS
 N obj
COLUMNS
    x obj 1
RHS
BOUNDS
 UP bnd x -2
ENDATA
)");
  CHECK(inst.colLower[0] == -kInf);
  CHECK(inst.colUpper[0] == -2.0);
}

TEST_CASE("fixed format reads column positions") {
  // fields start in columns 2, 5, 15, 25, 40 and 50
  auto line = [](std::vector<std::string> fields) {
    static const std::size_t starts[] = {1, 4, 14, 24, 39, 49};
    std::string out;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      out.resize(starts[k], ' ');
      out += fields[k];
    }
    return out + "\n";
  };
  const std::string fixed = "NAME          FIXED\nROWS\n" + line({"N", "COST"}) +
                            line({"L", "LIM1"}) + "COLUMNS\n" +
                            line({"", "X ONE", "COST", "1.0", "LIM1", "1.0"}) +
                            line({"", "Y", "COST", "2.0", "LIM1", "1.0"}) + "RHS\n" +
                            line({"", "RHS", "LIM1", "4.0"}) + "BOUNDS\n" +
                            line({"UP", "BND", "X ONE", "3.0"}) + "ENDATA\n";
  const auto inst = parseMps(fixed, MpsFormat::Fixed);
  REQUIRE(inst.numCols() == 2);
  CHECK(inst.colNames[0] == "X ONE");
  CHECK(inst.colUpper[0] == 3.0);
  CHECK(inst.rowUpper[0] == 4.0);
}

TEST_CASE("errors carry a kind and a line number") {
  int line = 0;
  CHECK(errorKind("NAME x\nCOLUMNS\n    x obj 1\nROWS\n N obj\nENDATA\n", &line) ==
        std::string("section-order"));
  CHECK(line == 2);
  CHECK(errorKind("NAME x\nROWS\n N obj\nCOLUMNS\n    x nope 1\nENDATA\n", &line) ==
        std::string("unknown-row"));
  CHECK(line == 5);
  CHECK(errorKind("NAME x\nROWS\n N obj\nCOLUMNS\n    x obj 1\nRHS\nBOUNDS\n UP b z 1\n"
                  "ENDATA\n",
                  &line) == std::string("unknown-column"));
  CHECK(line == 8);
  CHECK(errorKind("NAME x\nROWS\n N obj\n L c\n L c\nCOLUMNS\nENDATA\n") ==
        std::string("duplicate-name"));
  CHECK(errorKind("NAME x\nROWS\n N obj\nCOLUMNS\n    x obj 1\nRHS\nBOUNDS\n LO b x 3\n"
                  " UP b x 1\nENDATA\n",
                  &line) == std::string("inconsistent-bounds"));
  CHECK(line > 0);
  CHECK(errorKind("NAME x\nROWS\n N obj\nCOLUMNS\n    x obj abc\nENDATA\n") ==
        std::string("syntax"));
  CHECK(errorKind("NAME x\nENDATA\n") == std::string("missing-section"));
  CHECK_THROWS_AS(readMpsFile("/nonexistent/file.mps"), MpsError);
}

TEST_CASE("written knapsack parses back to the writer's original") {
  auto inst = oracle::makeInstance({{3, 4, 5.5}}, {-4, -5, -7}, {-kInf}, {9}, {0, 0, 0},
                                   {1, 1, 1}, std::vector<VarType>(3, VarType::Integer));
  inst.name = "knap3";
  inst.maximize = true;
  const std::string text = writeMpsString(inst);
  const auto back = parseMps(text);
  CHECK(back == inst);
}

TEST_CASE("write-parse round trip on random instances") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int rep = 0; rep < 50; ++rep) {
    auto inst = rep % 2 == 0 ? oracle::randomBoxLp(rng, 4, 5)
                             : oracle::randomSmallIntegerProgram(rng, 4, 2, 3);
    inst.name = "rt" + std::to_string(rep);
    inst.objectiveOffset = rep % 3 == 0 ? d(rng) : 0.0;
    inst.maximize = rep % 4 == 1;
    // values that need all 17 digits
    inst.objective[0] = d(rng) / 3.0;
    if (rep % 5 == 0) {
      inst.colLower[0] = -kInf;
      inst.objective.back() = 0.0;
    }
    if (rep % 7 == 0) inst.rowNames[0] = "OBJ";
    const auto back = parseMps(writeMpsString(inst));
    CHECK(back == inst);
    CHECK(parseMps(writeMpsString(back)) == back);
  }
}

TEST_CASE("gzip input is decompressed") {
  const auto dir = std::filesystem::temp_directory_path() / "lpfap_test_mps";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "small.mps.gz").string();
  gzFile f = gzopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  gzputs(f, kSmall);
  gzclose(f);
  const auto inst = readMpsFile(path);
  CHECK(inst.numCols() == 2);
  CHECK(inst.rowUpper[0] == 1.0);
  std::filesystem::remove_all(dir);
}
