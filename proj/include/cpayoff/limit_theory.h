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

#ifndef CPAYOFF_LIMIT_THEORY_H_
#define CPAYOFF_LIMIT_THEORY_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpayoff/game_model.h"
#include "cpayoff/puiseux.h"
#include "cpayoff/trajectory.h"

namespace cpayoff {

// A nonnegative limit that may be +infinity.
struct ExtendedReal {
  bool diverges = false;
  double value = 0.0;  // meaningful only when !diverges

  static ExtendedReal Finite(double v) { return {false, v}; }
  static ExtendedReal Diverges() { return {true, 0.0}; }
  std::string ToString() const;
};

// Limit of sum over the window stages of (lambda_m)^e as the evaluation
// vanishes: diverges for e < 1, ln((1-t)/(1-t-h)) for e = 1, 0 for e > 1.
// Throws kWindowOutOfRange unless 0 <= t < t+h < 1.
ExtendedReal WindowDiscountLimit(double e, double t, double h);

// sum_{m = Clock(t)}^{Clock(t+h)} EffectiveDiscount(m)^e.
double WindowDiscountSum(const Evaluation& eval, double e, double t, double h);

// Limit probability of still being in the live state at time t:
// 1 when c = 0 or e > 1, (1-t)^c when e = 1, 0 when e < 1.
double SurvivalProbability(double c, Exponent e, double t);

// Integral of SurvivalProbability over [0, t].
double IntegratedSurvival(double c, Exponent e, double t);

struct AbsorbingLimitLaw {
  int live = 0;
  double c = 0.0;  // exit coefficient of the live state
  Exponent e;      // exit exponent of the live state
  Eigen::VectorXd exit_distribution;  // a, zero at the live state
  Eigen::VectorXd limit_payoff;       // g0 per state

  // P_t from the live state.
  Eigen::VectorXd Marginal(double t) const;
  // Pi_t from the live state.
  Eigen::VectorXd Occupation(double t) const;
};

// Law induced by the leading terms of the stage transitions out of the live
// state. Throws kNotAbsorbing.
AbsorbingLimitLaw BuildAbsorbingLimitLaw(const GameSpec& game,
                                         const PuiseuxExpansion& expansion);

TrajectoryCurve AbsorbingLimitCurve(const AbsorbingLimitLaw& law,
                                    const std::vector<double>& grid);

// exp(a) by scaling and squaring with a degree-13 Pade approximant.
Eigen::MatrixXd MatrixExponential(const Eigen::MatrixXd& a);

// exp(-ln(1-t) a); for t = 1 the exponent is capped at -ln(1e-12).
Eigen::MatrixXd CriticalMarginal(const Eigen::MatrixXd& a, double t);

struct QuadratureOptions {
  int initial_panels = 16;
  int max_panels = 1 << 16;
  double tolerance = 1e-8;
};

// Pi between t0 and t1: composite Simpson of s -> exp(-ln(1-s) a), doubling
// the panel count until two successive results differ by <= tolerance.
// Throws kQuadratureNotConverged.
Eigen::MatrixXd CriticalOccupationIncrement(const Eigen::MatrixXd& a,
                                            double t0, double t1,
                                            const QuadratureOptions& options = {});

// Pi_t for t in [0,1]. At t = 1 the last 1e-9 of time is added as a single
// rectangle.
Eigen::MatrixXd CriticalOccupation(const Eigen::MatrixXd& a, double t,
                                   const QuadratureOptions& options = {});

// Curve from `initial`: marginal exp(-ln(1-t) A), occupation Pi_t, gamma
// (Pi_t g0) at the initial state.
TrajectoryCurve CriticalLimitCurve(const Eigen::MatrixXd& a,
                                   const Eigen::VectorXd& g0,
                                   const std::vector<double>& grid, int initial,
                                   const QuadratureOptions& options = {});

// exp(-ln(1-t) A) A g0 / (1-t), the second derivative of t -> Pi_t g0.
Eigen::VectorXd CriticalSecondDerivative(const Eigen::MatrixXd& a,
                                         const Eigen::VectorXd& g0, double t);

struct LinearityReport {
  double sup_error = 0.0;   // max over the grid of |gamma(t) - t v|
  double worst_t = 0.0;
  double second_difference = 0.0;  // max |second divided difference|
  bool is_linear = false;
};

LinearityReport LinearityCheck(const TrajectoryCurve& curve, double value,
                               double tolerance = 0.02);

// Sup over grid points of |gamma_a - gamma_b|; grids must match.
double CurveDistance(const TrajectoryCurve& a, const TrajectoryCurve& b);

}  // namespace cpayoff

#endif  // CPAYOFF_LIMIT_THEORY_H_
