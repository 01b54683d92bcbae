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

#ifndef LPFAP_FOLP_HPP
#define LPFAP_FOLP_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "lpfap/model.hpp"

namespace lpfap {

/// Restarted primal-dual hybrid gradient for
///
///   min c^T x  s.t.  L <= A x <= U,  l <= x <= u
///
/// Integrality marks of the input are ignored.
struct FolpConfig {
  /// Relative tolerance for primal residual, dual residual and gap.
  double tolerance = 1e-4;
  std::int64_t maxIterations = 1'000'000;
  /// Wall-clock seconds.
  double timeLimit = kInf;
  /// Restart when the restart measure has decayed below this fraction of
  /// its value at the last restart.
  double restartRatio = 0.36;
  /// Secondary restart: decayed below this fraction and no longer improving.
  double necessaryRestartRatio = 0.8;
  /// tau = sigma * omega^-2 = stepScale / (omega ||A||), sigma = stepScale omega / ||A||.
  double stepScale = 0.9;
  /// Fixed primal weight omega.
  double primalWeight = 1.0;
  int powerIterations = 30;
  int ruizIterations = 10;
  /// Iterations between residual evaluations (restart + termination checks).
  int checkFrequency = 64;
  /// Iterate norm above which the solver gives up with PrimalInfeasibleGuess.
  double divergenceThreshold = 1e12;
  /// Emits one structured line per check to `log` when set.
  std::ostream* log = nullptr;

  void validate() const;
};

enum class LpStatus { Optimal, IterLimit, TimeLimit, PrimalInfeasibleGuess };

const char* toString(LpStatus status);

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;

  bool within(double tol) const {
    return primal <= tol && dual <= tol && gap <= tol;
  }
};

struct LpSolution {
  std::vector<double> x;
  /// Row duals; y_i > 0 prices the lower row bound, y_i < 0 the upper.
  std::vector<double> y;
  /// c - A^T y
  std::vector<double> reducedCosts;
  double primalObjective = 0.0;
  double dualObjective = 0.0;
  Residuals residuals;
  std::int64_t iterations = 0;
  LpStatus status = LpStatus::IterLimit;
  /// Restart measure accepted at each restart, in order.
  std::vector<double> restartMeasures;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LpSolution pdhgSolve(const MipInstance& instance, const FolpConfig& config);

/// c - A^T y. Throws std::invalid_argument on dimension mismatch.
std::vector<double> reducedCosts(const MipInstance& instance,
                                 std::span<const double> y);

/// Lagrangian dual bound at y: sum of row bound terms plus the bound-dual
/// imputation of the reduced costs, plus the objective offset.
double dualObjective(const MipInstance& instance, std::span<const double> y);

/// Relative residuals used for termination:
///   primal = ||dist(Ax, [L,U])||_2 / (1 + max(||L_fin||_2, ||U_fin||_2))
///   dual   = ||c - A^T y - z||_2 / (1 + ||c||_2)
///   gap    = |c^T x - dual(y)| / (1 + |c^T x| + |dual(y)|)
/// where z is the part of the reduced cost that finite column bounds can
/// absorb. Throws std::invalid_argument on dimension mismatch.
Residuals computeResiduals(const MipInstance& instance,
                           std::span<const double> x,
                           std::span<const double> y);

}  // namespace lpfap

#endif  // LPFAP_FOLP_HPP
