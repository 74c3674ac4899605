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

#ifndef CPAYOFF_EXPERIMENT_H_
#define CPAYOFF_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cpayoff/discounted_solver.h"
#include "cpayoff/game_model.h"
#include "cpayoff/limit_theory.h"
#include "cpayoff/puiseux.h"
#include "cpayoff/trajectory.h"

namespace cpayoff {

// Discounts used to fit expansions when none are given.
std::vector<double> DefaultFitLadder();

struct FittedGame {
  std::vector<DiscountedSolution> ladder;
  PuiseuxExpansion expansion;
  LimitValueEstimate limit;
};

FittedGame FitGame(const GameSpec& game,
                   const std::vector<double>& ladder = DefaultFitLadder());

// Member of a family with ||theta|| = norm: "discounted" (lambda = norm),
// "uniform" (T = round(1/norm)) or "power" (exponent alpha).
Evaluation FamilyWithNorm(const std::string& family, double norm,
                          double alpha = 0.5);

enum class LimitPath { kAbsorbing, kCritical, kNone };
std::string LimitPathName(LimitPath path);

// Limit objects predicted for the fitted expansion. The absorbing path is
// preferred when both apply.
struct LimitModel {
  LimitPath path = LimitPath::kNone;
  AbsorbingLimitLaw absorbing;
  Eigen::MatrixXd generator;
  Eigen::VectorXd limit_payoff;

  // Throws kNotCoveredByTheory on the kNone path.
  TrajectoryCurve Curve(const std::vector<double>& grid, int initial) const;
};

LimitModel BuildLimitModel(const GameSpec& game,
                           const PuiseuxExpansion& expansion);

struct ExperimentConfig {
  std::string game;  // builtin name or game file
  std::vector<std::string> families = {"discounted", "uniform", "power"};
  std::vector<double> norms = {1e-2, 1e-3, 1e-4};
  double alpha = 0.5;
  int grid_points = 101;
  KernelMode mode = KernelMode::kLeadingTerm;
  uint64_t seed = 0;
  std::string out_dir;  // empty: no files

  // Throws kInvalidArgument.
  void Validate() const;
};

struct SummaryRow {
  std::string family;
  std::string descriptor;
  double norm = 0.0;
  double sup_error = 0.0;
  std::optional<double> limit_distance;
  double second_difference = 0.0;
};

struct VerifyResult {
  std::string game_name;
  int initial = 0;
  double value = 0.0;  // estimated limit value at the initial state
  LimitPath path = LimitPath::kNone;
  bool covered = false;
  std::vector<SummaryRow> rows;
  std::vector<std::string> files;
};

// Propagates every family along the norm ladder, compares each curve with
// t v and with the limit curve, and writes one CSV per curve, a summary CSV
// and an SVG plot when out_dir is set. Games outside both limit paths are
// reported with covered = false.
VerifyResult RunVerify(const ExperimentConfig& config);

std::string SummaryToCsv(const VerifyResult& result);

// Standalone SVG with one polyline per (label, curve) plotting gamma
// against t.
std::string RenderCurvesSvg(
    const std::string& title,
    const std::vector<std::pair<std::string, const TrajectoryCurve*>>& curves);

}  // namespace cpayoff

#endif  // CPAYOFF_EXPERIMENT_H_
