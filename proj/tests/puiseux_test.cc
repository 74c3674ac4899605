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

#include <cmath>
#include <functional>
#include <set>

#include "doctest.h"
#include "cpayoff/builtin_games.h"
#include "cpayoff/discounted_solver.h"
#include "cpayoff/error.h"
#include "cpayoff/puiseux.h"

namespace cpayoff {
namespace {

const std::vector<double> kLadder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

// One state with a single series per player. The fitter works action by
// action, so the rows need not be normalized.
std::vector<LadderPoint> Synthetic(const std::function<double(double)>& p) {
  std::vector<LadderPoint> out;
  for (double lambda : kLadder) {
    LadderPoint point;
    point.lambda = lambda;
    point.profile.x = {{p(lambda)}};
    point.profile.y = {{1.0}};
    out.push_back(point);
  }
  return out;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

TEST_CASE("exponent arithmetic") {
  CHECK(Exponent::Snap(0.49999, 12) == Exponent(1, 2));
  CHECK(Exponent::Snap(1.0000001, 12) == kExponentOne);
  CHECK(Exponent::Snap(0.3334, 12) == Exponent(1, 3));
  CHECK(Exponent::Snap(-0.01, 12) == kExponentZero);
  CHECK(Exponent(2, 4).ToString() == "1/2");
  CHECK(Exponent(1, 2) + Exponent(1, 2) == kExponentOne);
  CHECK(Exponent(1, 3) < Exponent(1, 2));
  CHECK(Exponent(3, 2) > kExponentOne);
}

TEST_CASE("fit recovers synthetic power laws") {
  for (double e : {0.0, 0.25, 0.5, 1.0, 1.5}) {
    for (int ci = 1; ci <= 10; ++ci) {
      const double c = 0.1 * ci;
      const PuiseuxExpansion fit =
          FitExpansion(Synthetic([&](double l) { return c * std::pow(l, e); }));
      const PuiseuxTerm& t = fit.p1[0][0];
      CHECK(t.exponent.value() == doctest::Approx(e));
      CHECK(std::abs(t.coefficient - c) <= 1e-6);
    }
  }
}

TEST_CASE("fit of a square-root ladder") {
  const PuiseuxExpansion fit =
      FitExpansion(Synthetic([](double l) { return 2.0 * std::sqrt(l); }));
  CHECK(fit.p1[0][0].exponent == Exponent(1, 2));
  CHECK(fit.p1[0][0].coefficient == doctest::Approx(2.0));
  CHECK(fit.fit_residual <= 1e-9);
}

TEST_CASE("fit failures") {
  CHECK(CodeOf([] {
          FitExpansion(Synthetic([](double l) { return l >= 1e-3 ? l : l * l * 1e3; }));
        }) == ErrorCode::kUnstableExponent);
  std::vector<LadderPoint> short_ladder = Synthetic([](double l) { return l; });
  short_ladder.resize(3);
  CHECK(CodeOf([&] { FitExpansion(short_ladder); }) == ErrorCode::kLadderTooShort);
  // Exact zeros give (0, 0).
  const PuiseuxExpansion z = FitExpansion(Synthetic([](double) { return 0.0; }));
  CHECK(z.p1[0][0].coefficient == 0.0);
  CHECK(z.p1[0][0].exponent == kExponentZero);
}

TEST_CASE("big match leading terms") {
  const GameSpec g = BuiltinGame("big_match");
  const PuiseuxExpansion e = FitExpansion(SolveLadder(g, kLadder));
  CHECK(e.p1[0][0].exponent == kExponentOne);
  CHECK(std::abs(e.p1[0][0].coefficient - 1.0) <= 1e-3);
  CHECK(e.p2[0][0].exponent == kExponentZero);
  CHECK(std::abs(e.p2[0][0].coefficient - 0.5) <= 1e-6);
  CHECK(e.ZeroOrderMassDefect() <= 1e-4);

  const ActionClassification cls = ClassifyActions(e);
  CHECK(cls.p1[0][0] == ActionClass::kOne);
  CHECK(cls.p1[0][1] == ActionClass::kZero);
  CHECK(ActionClassification::Members(cls.p2[0], ActionClass::kZero) ==
        std::vector<int>{0, 1});

  const StationaryProfile lt = LeadingTermProfile(e, 1e-3);
  CHECK(lt.x[0][0] == doctest::Approx(1e-3 / (1 + 1e-3)).epsilon(1e-4));
}

TEST_CASE("classification partitions actions") {
  PuiseuxExpansion e;
  e.p1 = {{{0.5, kExponentZero}, {1.0, Exponent(1, 2)}, {2.0, kExponentOne},
           {1.0, Exponent(3, 2)}}};
  e.p2 = {{{1.0, kExponentZero}}};
  const ActionClassification cls = ClassifyActions(e);
  std::set<ActionClass> seen(cls.p1[0].begin(), cls.p1[0].end());
  CHECK(seen.size() == 4);
}

TEST_CASE("exit rates of the absorbing fixtures") {
  const GameSpec bm = BuiltinGame("big_match");
  const PuiseuxExpansion e = FitExpansion(SolveLadder(bm, kLadder));
  const AbsorbingExitRates r = ExitRates(bm, e, 0);
  CHECK(r.TotalRate() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.a10[1] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r.a10[2] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r.a01.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.a_star.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.limit_payoff == doctest::Approx(0.5));
  CHECK(r.rates.sum() == doctest::Approx(0.0));

  const GameSpec a3 = BuiltinGame("absorbing3");
  const auto ladder = SolveLadder(a3, kLadder);
  const PuiseuxExpansion e3 = FitExpansion(ladder);
  const AbsorbingExitRates r3 = ExitRates(a3, e3, 0);
  CHECK(-r3.a10[0] > 0.5);
  CHECK(-r3.a01[0] > 0.5);

  // Brute-force pair enumeration of the order-lambda rates.
  Eigen::VectorXd brute = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const PuiseuxTerm& x = e3.p1[0][i];
      const PuiseuxTerm& y = e3.p2[0][j];
      if (x.coefficient == 0 || y.coefficient == 0) continue;
      if (x.exponent.value() + y.exponent.value() != 1.0) continue;
      for (int l = 1; l < 3; ++l) {
        brute[l] += x.coefficient * y.coefficient * a3.Transition(0, i, j, l);
      }
    }
  }
  CHECK(brute[1] == doctest::Approx(r3.rates[1]));
  CHECK(brute[2] == doctest::Approx(r3.rates[2]));
  CHECK(-r3.rates[0] == r3.rates[1] + r3.rates[2]);

  // Value identity and the one-sided deviation bracket.
  for (const auto& [game, rates] :
       {std::pair{&bm, r}, std::pair{&a3, r3}}) {
    const Eigen::VectorXd v = SolveDiscounted(*game, 1e-6).values;
    const DeviationLimits d = DeviationDiagnostics(rates, v);
    CHECK(std::abs(d.value_identity - v[0]) <= 1e-3);
    CHECK(d.player1_deviation <= v[0] + 1e-3);
    REQUIRE(d.player2_deviation.has_value());
    CHECK(*d.player2_deviation >= v[0] - 1e-3);
  }

  CHECK(CodeOf([&] { ExitRates(bm, e, 1); }) == ErrorCode::kNotAbsorbing);
  PuiseuxExpansion fast = e;
  fast.p1[0][0].exponent = Exponent(1, 2);
  CHECK(CodeOf([&] { ExitRates(bm, fast, 0); }) == ErrorCode::kUnstableExponent);
}

TEST_CASE("symmetric exits split between both players") {
  const GameSpec a3 = BuiltinGame("absorbing3");
  PuiseuxExpansion e = FitExpansion(SolveLadder(a3, kLadder));
  // Player 1 leaves through T at order lambda, player 2 through X.
  e.p1[0] = {{0.5, kExponentZero}, {0.5, kExponentZero}, {0.5, kExponentOne}};
  e.p2[0] = {{1.0, kExponentZero}, {0.0, kExponentZero}, {0.5, kExponentOne}};
  const AbsorbingExitRates r = ExitRates(a3, e, 0);
  double p1_exit = 0.0, p2_exit = 0.0;
  for (int l = 1; l < 3; ++l) {
    p1_exit += 0.5 * 1.0 * a3.Transition(0, 2, 0, l);
    p2_exit += 0.5 * 0.5 * (a3.Transition(0, 0, 2, l) + a3.Transition(0, 1, 2, l));
  }
  CHECK(p1_exit == doctest::Approx(0.5));
  CHECK(p2_exit == doctest::Approx(0.5));
  CHECK(-r.a10[0] == doctest::Approx(p1_exit));
  CHECK(-r.a01[0] == doctest::Approx(p2_exit));
  CHECK(r.a_star.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("transition leading terms") {
  const GameSpec bm = BuiltinGame("big_match");
  const PuiseuxExpansion e = FitExpansion(SolveLadder(bm, kLadder));
  const LeadingTerm out = TransitionLeadingTerm(bm, e, 0, 1);
  CHECK(out.exponent == kExponentOne);
  CHECK(out.coefficient == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(TransitionLeadingTerm(bm, e, 1, 0).coefficient == 0.0);
  CHECK(LimitStagePayoff(bm, e, 1) == 1.0);
}

}  // namespace
}  // namespace cpayoff
