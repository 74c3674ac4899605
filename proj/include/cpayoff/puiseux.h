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

#ifndef CPAYOFF_PUISEUX_H_
#define CPAYOFF_PUISEUX_H_

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpayoff/discounted_solver.h"
#include "cpayoff/game_model.h"

namespace cpayoff {

// Nonnegative rational exponent num/den in lowest terms.
class Exponent {
 public:
  constexpr Exponent() = default;
  Exponent(long num, long den);

  // Nearest fraction with denominator <= max_den (smallest denominator on
  // ties), clamped at zero.
  static Exponent Snap(double value, int max_den);

  long num() const { return num_; }
  long den() const { return den_; }
  double value() const { return static_cast<double>(num_) / den_; }
  std::string ToString() const;

  friend Exponent operator+(Exponent a, Exponent b);
  friend bool operator==(Exponent a, Exponent b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(Exponent a, Exponent b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

 private:
  long num_ = 0;
  long den_ = 1;
};

inline const Exponent kExponentZero{0, 1};
inline const Exponent kExponentOne{1, 1};

// Leading term c lambda^e of one action probability; c = 0 implies e = 0.
struct PuiseuxTerm {
  double coefficient = 0.0;
  Exponent exponent;
  // Relative error predicting the smallest ladder discount from the others.
  double residual = 0.0;

  double Evaluate(double lambda) const;
};

struct PuiseuxExpansion {
  std::vector<std::vector<PuiseuxTerm>> p1;  // [state][action]
  std::vector<std::vector<PuiseuxTerm>> p2;
  double fit_residual = 0.0;

  int num_states() const { return static_cast<int>(p1.size()); }
  // max over states and players of |sum of exponent-0 coefficients - 1|.
  double ZeroOrderMassDefect() const;
};

struct LadderPoint {
  double lambda = 0.0;
  StationaryProfile profile;
};

inline constexpr int kMaxExponentDenominator = 12;
inline constexpr double kProbabilityFloor = 1e-14;

// Fits the leading term of every action probability along a ladder of at
// least four discounts, each at most a tenth of the previous one. The
// exponent is the log-log slope over the last gap snapped to a fraction with
// denominator <= max_den; the coefficient is the geometric mean of
// p / lambda^e over the last two rungs. An action below kProbabilityFloor at
// the smallest discount gets (0, 0). Throws kLadderTooShort, or
// kUnstableExponent when consecutive slopes differ by more than 0.1.
PuiseuxExpansion FitExpansion(const std::vector<LadderPoint>& ladder,
                              int max_den = kMaxExponentDenominator);
PuiseuxExpansion FitExpansion(const std::vector<DiscountedSolution>& ladder,
                              int max_den = kMaxExponentDenominator);

// Profile whose action probabilities are the leading terms c lambda^e,
// clipped to [0,1] and renormalized per state.
StationaryProfile LeadingTermProfile(const PuiseuxExpansion& expansion,
                                     double lambda);

enum class ActionClass {
  kZero,        // exponent 0
  kFractional,  // exponent in (0,1)
  kOne,         // exponent 1
  kHigher,      // exponent > 1, or zero coefficient
};

struct ActionClassification {
  std::vector<std::vector<ActionClass>> p1;  // [state][action]
  std::vector<std::vector<ActionClass>> p2;

  static std::vector<int> Members(const std::vector<ActionClass>& row,
                                  ActionClass cls);
};

ActionClass Classify(const PuiseuxTerm& term);
ActionClassification ClassifyActions(const PuiseuxExpansion& expansion);

// Leading term of Q_lambda(from, to) = sum_ij x(i) y(j) q(to|from,i,j) under
// the expansion: the smallest exponent sum over contributing action pairs
// and the summed coefficients at that order. Zero coefficient when no pair
// contributes.
struct LeadingTerm {
  double coefficient = 0.0;
  Exponent exponent;
};
LeadingTerm TransitionLeadingTerm(const GameSpec& game,
                                  const PuiseuxExpansion& expansion, int from,
                                  int to);

// Limit stage payoff in state k under the exponent-0 actions.
double LimitStagePayoff(const GameSpec& game, const PuiseuxExpansion& expansion,
                        int k);

// Order-lambda exit rates out of the live state of an absorbing game.
// Rows are indexed by destination state; the live entry holds minus the
// total rate. a10 collects pairs (exponent 1, exponent 0), a01 pairs
// (exponent 0, exponent 1) and a_star fractional pairs with exponents
// summing to one.
struct AbsorbingExitRates {
  int live = 0;
  Eigen::VectorXd rates;
  Eigen::VectorXd a10;
  Eigen::VectorXd a_star;
  Eigen::VectorXd a01;
  double limit_payoff = 0.0;  // g0 at the live state

  double TotalRate() const { return -rates[live]; }
};

// Throws kNotAbsorbing unless `live` is the unique non-absorbing state, and
// kUnstableExponent if some exit pair has exponent sum below one.
AbsorbingExitRates ExitRates(const GameSpec& game,
                             const PuiseuxExpansion& expansion, int live);

// Limits of the live-state discounted payoff under the two one-sided
// deviations of the absorbing analysis, and the value identity.
struct DeviationLimits {
  // Player 1 keeps only exponent-0 actions:
  //   (g0 + sum A01 v) / (1 + |A01|).
  double player1_deviation = 0.0;
  // Player 2 speeds up its order-lambda exits: sum A v / |A|. Empty when
  // there is no exit.
  std::optional<double> player2_deviation;
  // (g0 + sum A v) / (1 + |A|), which equals v at the live state.
  double value_identity = 0.0;
};

DeviationLimits DeviationDiagnostics(const AbsorbingExitRates& rates,
                                     const Eigen::VectorXd& values);

}  // namespace cpayoff

#endif  // CPAYOFF_PUISEUX_H_
