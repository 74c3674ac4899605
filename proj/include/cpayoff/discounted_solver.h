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

#ifndef CPAYOFF_DISCOUNTED_SOLVER_H_
#define CPAYOFF_DISCOUNTED_SOLVER_H_

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cpayoff/game_model.h"

namespace cpayoff {

using BasisHints = std::vector<std::vector<int>>;  // one LP basis per state

struct DiscountedSolution {
  double lambda = 0.0;
  Eigen::VectorXd values;
  StationaryProfile profile;
  // sup-norm of Psi(v) - v at the returned values.
  double residual = 0.0;
  int iterations = 0;
  BasisHints bases;
};

struct LimitValueEstimate {
  Eigen::VectorXd values;
  std::vector<std::pair<double, Eigen::VectorXd>> ladder;
  double extrapolation_error = 0.0;
};

// val[ lambda g(k,.,.) + (1-lambda) sum_l q(l|k,.,.) v^l ] for state k.
Eigen::MatrixXd AuxiliaryMatrix(const GameSpec& game, double lambda,
                                const Eigen::VectorXd& v, int k);

// The lambda-discounted Shapley operator.
Eigen::VectorXd ShapleyOperator(const GameSpec& game, double lambda,
                                const Eigen::VectorXd& v);

// Default tolerance 1e-12 * max(1, max|g|).
double DefaultTolerance(const GameSpec& game);

struct DiscountedOptions {
  double tolerance = 0.0;  // <= 0 selects DefaultTolerance
  // LP bases from a nearby discount, pivoted in first at every state.
  const BasisHints* warm_start = nullptr;
  // Try the exact value of the current greedy profile as the next iterate
  // whenever it beats the contraction bound.
  bool policy_jumps = true;
};

// Value iteration on the Shapley operator until ||Psi(v) - v|| <= tol. The
// returned profile holds the optimal LP strategies of the auxiliary games at
// the returned values. Throws kMaxIterationsExceeded once the iteration count
// passes the contraction budget log(tol / 2max|g|) / log(1 - lambda).
DiscountedSolution SolveDiscounted(const GameSpec& game, double lambda,
                                   const DiscountedOptions& options = {});

// Solves each discount of a strictly decreasing ladder, warm-starting every
// LP from the previous rung.
std::vector<DiscountedSolution> SolveLadder(const GameSpec& game,
                                            const std::vector<double>& ladder,
                                            double tolerance = 0.0);

// Largest gain from a pure deviation in any auxiliary game at the solution.
double AuxiliaryOptimalityGap(const GameSpec& game,
                              const DiscountedSolution& solution);

// v_lambda along the ladder plus a Richardson extrapolation in powers
// lambda^(1/d), d = 1..n, choosing d by how well it predicts the third-last
// rung. extrapolation_error is the spread between the estimates from the last
// two pairs of rungs.
LimitValueEstimate EstimateLimitValue(const GameSpec& game,
                                      const std::vector<double>& ladder);

}  // namespace cpayoff

#endif  // CPAYOFF_DISCOUNTED_SOLVER_H_
