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

#ifndef CPAYOFF_STRUCTURE_CHECKS_H_
#define CPAYOFF_STRUCTURE_CHECKS_H_

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "cpayoff/game_model.h"
#include "cpayoff/puiseux.h"

namespace cpayoff {

// Return path l -> l2 -> l with a branch l -> l3 under a different action of
// the checked player. For H1 the distinct actions are i and i_bar (Player 1)
// and j == j_bar; for H2 the roles swap.
struct HypothesisWitness {
  int l = 0;
  int l2 = 0;
  int l3 = 0;
  int i = 0;
  int i_bar = 0;
  int j = 0;
  int j_bar = 0;
  int i2 = 0;
  int j2 = 0;

  std::string ToString() const;
  friend bool operator==(const HypothesisWitness&,
                         const HypothesisWitness&) = default;
};

struct HypothesisReport {
  bool holds = true;
  std::optional<HypothesisWitness> witness;
};

// Exact enumeration; the first witness in lexicographic order of
// (l, l2, l3, i, i_bar, j, j_bar, i2, j2) is returned.
HypothesisReport CheckH1(const GameSpec& game);
HypothesisReport CheckH2(const GameSpec& game);

// The unique non-absorbing state when exactly n-1 states are absorbing.
std::optional<int> IsAbsorbing(const GameSpec& game);

// Generator A: nonnegative off-diagonal rates, zero row sums.
using GeneratorMatrix = Eigen::MatrixXd;

// Validates the generator invariants up to tol.
bool IsGenerator(const Eigen::MatrixXd& a, double tol = 1e-10);

// A when every off-diagonal transition has leading exponent >= 1, built from
// the exponent-1 coefficients; empty otherwise.
std::optional<GeneratorMatrix> CriticalityCheck(
    const GameSpec& game, const PuiseuxExpansion& expansion);

// Strategy family x_lambda^T, y_lambda^T. Actions with exponent in (0,1] get
// c T^(1-e) lambda, those with exponent > 1 or zero coefficient get nothing,
// and the exponent-0 actions share the rest in proportion to c.
class CriticalRegularization {
 public:
  CriticalRegularization(const PuiseuxExpansion& expansion, double t_param);

  // Largest lambda for which every row keeps its exponent-0 mass >= 0.
  double lambda_cap() const { return lambda_cap_; }
  double t_param() const { return t_param_; }

  // Throws kMassOverflow above the cap.
  StationaryProfile Profile(double lambda) const;

  // Exact leading terms of the family: (c T^(1-e), 1) on perturbed actions
  // and (c / mass0, 0) on exponent-0 actions.
  PuiseuxExpansion Expansion() const;

 private:
  struct Row {
    std::vector<double> order_one;  // coefficient of lambda per action
    std::vector<double> base;       // exponent-0 weights, normalized
  };
  static std::vector<Row> BuildRows(
      const std::vector<std::vector<PuiseuxTerm>>& terms, double t_param);

  std::vector<Row> p1_;
  std::vector<Row> p2_;
  double t_param_;
  double lambda_cap_;
};

}  // namespace cpayoff

#endif  // CPAYOFF_STRUCTURE_CHECKS_H_
