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

#ifndef LPFAP_MODEL_HPP
#define LPFAP_MODEL_HPP

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpfap/sparse_matrix.hpp"

namespace lpfap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType : char { Continuous, Integer };

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mixed-integer program
///
///   min  c^T x + offset
///   s.t. rowLower <= A x <= rowUpper
///        colLower <=  x  <= colUpper
///        x_j integral for varType[j] == Integer
///
/// Maximization problems are stored negated with `maximize` set, so every
/// solver component only ever sees a minimization.
struct MipInstance {
  std::string name;
  SparseMatrix matrix;
  std::vector<double> objective;
  double objectiveOffset = 0.0;
  bool maximize = false;
  std::vector<double> rowLower;
  std::vector<double> rowUpper;
  std::vector<double> colLower;
  std::vector<double> colUpper;
  std::vector<VarType> varType;
  std::vector<std::string> rowNames;
  std::vector<std::string> colNames;

  int numRows() const { return matrix.numRows(); }
  int numCols() const { return matrix.numCols(); }

  bool isIntegral(int j) const { return varType[j] == VarType::Integer; }
  bool isBinary(int j) const {
    return isIntegral(j) && colLower[j] == 0.0 && colUpper[j] == 1.0;
  }
  std::vector<int> integerIndices() const;

  /// c^T x + offset, in the internal (minimization) sense.
  double evaluate(std::span<const double> x) const;
  /// Converts an internal objective value back to the sense of the input.
  double externalObjective(double internal) const {
    return maximize ? -internal : internal;
  }

  bool operator==(const MipInstance&) const = default;
};

/// Validates dimensions and bound consistency, fills default names, and
/// rounds integral bounds inward (ceil of lower, floor of upper).
/// Throws InvalidInstance on any violation.
void finalizeInstance(MipInstance& instance);

/// The same instance with every integrality mark dropped.
MipInstance lpRelaxation(const MipInstance& instance);

struct MipSolution {
  std::vector<double> x;
  double objective = 0.0;
  double maxRowViolation = 0.0;
  double maxBoundViolation = 0.0;
  double maxIntegralityViolation = 0.0;
  bool feasible = false;
};

/// Relative feasibility of x: row violations scaled by 1 + |violated row
/// bound|, bound violations by 1 + |violated bound|, integrality measured
/// as |x_j - round(x_j)|. Feasible iff all three are <= relTol.
MipSolution checkFeasibility(const MipInstance& instance,
                             std::span<const double> x, double relTol);

inline constexpr double kGapReferenceFloor = 1e-10;
inline constexpr double kGapCap = 1e6;

/// 100 |obj - reference| / max(|reference|, 1e-10), capped at 1e6 percent.
double gapPercent(double objective, double reference);

}  // namespace lpfap

#endif  // LPFAP_MODEL_HPP
