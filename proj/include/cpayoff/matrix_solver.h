// Copyright 2026 The cpayoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CPAYOFF_MATRIX_SOLVER_H_
#define CPAYOFF_MATRIX_SOLVER_H_

#include <vector>

#include <Eigen/Dense>

#include "cpayoff/rational.h"

namespace cpayoff {

// Value and optimal mixed strategies of the zero-sum game in which the row
// player maximizes x^T A y.
template <typename T>
struct BasicMatrixGameSolution {
  T value{};
  std::vector<T> x_opt;  // row player
  std::vector<T> y_opt;  // column player
  // max_i (A y)_i - min_j (x^T A)_j, never negative.
  T duality_gap{};
  // Final simplex basis, usable as a warm-start hint for a nearby matrix of
  // the same shape.
  std::vector<int> basis;
};

using MatrixGameSolution = BasicMatrixGameSolution<double>;
using ExactMatrixGameSolution = BasicMatrixGameSolution<Rational>;
using RationalMatrix = std::vector<std::vector<Rational>>;

// Duality gap tolerance of the floating-point solver, relative to
// max(1, max |A|).
inline constexpr double kMatrixGameTolerance = 1e-10;

// Shifts A to positive entries and solves the reciprocal-value LP with a
// dense tableau simplex under Bland's lowest-index rule, so identical inputs
// give identical strategies. A basis hint from a previous solve is pivoted
// in first; the result is still optimal for A. Throws kNumericalFailure if
// the simplex does not terminate or the duality gap exceeds the tolerance.
MatrixGameSolution SolveMatrixGame(const Eigen::MatrixXd& payoff,
                                   const std::vector<int>* basis_hint = nullptr);

// Same algorithm over exact rationals; the returned duality gap is zero.
ExactMatrixGameSolution SolveMatrixGameExact(const RationalMatrix& payoff);

}  // namespace cpayoff

#endif  // CPAYOFF_MATRIX_SOLVER_H_
