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
#include <string>

#include "doctest.h"
#include "cpayoff/builtin_games.h"
#include "cpayoff/error.h"
#include "cpayoff/game_io.h"
#include "cpayoff/game_model.h"
#include "cpayoff/rational.h"

namespace cpayoff {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

GameData OneStateData() {
  GameData d;
  d.states = {"a", "b"};
  d.actions1 = {"u", "d"};
  d.actions2 = {"l"};
  d.payoff = {{{Rational(1)}, {Rational(0)}}, {{Rational(2)}, {Rational(3)}}};
  d.transition = {{{{Rational(1, 2), Rational(1, 2)}}, {{Rational(1), Rational(0)}}},
                  {{{Rational(0), Rational(1)}}, {{Rational(0), Rational(1)}}}};
  return d;
}

TEST_CASE("rational parsing") {
  CHECK(ParseRational("3/4") == Rational(3, 4));
  CHECK(ParseRational("-0.25") == Rational(-1, 4));
  CHECK(ParseRational("1e-3") == Rational(1, 1000));
  CHECK(FormatRational(Rational(6, 4)) == "3/2");
  CHECK(FormatRational(Rational(5)) == "5");
  CHECK(CodeOf([] { ParseRational("1/0"); }) == ErrorCode::kParseError);
  CHECK(CodeOf([] { ParseRational("abc"); }) == ErrorCode::kParseError);
  CHECK(RationalFromDouble(0.1) == Rational(1, 10));
}

TEST_CASE("validation names the offending cell") {
  GameSpec ok = GameSpec::Validate(OneStateData());
  CHECK(ok.num_states() == 2);
  CHECK(ok.Transition(0, 0, 0, 1) == doctest::Approx(0.5));
  CHECK(ok.MaxAbsPayoff() == 3.0);

  GameData bad = OneStateData();
  bad.transition[1][0][0][1] = Rational(9, 10);
  try {
    GameSpec::Validate(bad);
    FAIL("accepted a row summing to 9/10");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRowSumNotOne);
    CHECK(std::string(e.what()).find("(1,0,0)") != std::string::npos);
  }
  bad = OneStateData();
  bad.transition[0][0][0] = {Rational(3, 2), Rational(-1, 2)};
  CHECK(CodeOf([&] { GameSpec::Validate(bad); }) ==
        ErrorCode::kNegativeProbability);
  bad = OneStateData();
  bad.payoff[0].pop_back();
  CHECK(CodeOf([&] { GameSpec::Validate(bad); }) ==
        ErrorCode::kDimensionMismatch);
  bad = OneStateData();
  bad.initial = 4;
  CHECK(CodeOf([&] { GameSpec::Validate(bad); }) ==
        ErrorCode::kIndexOutOfRange);
}

TEST_CASE("builtin games round-trip through the file format") {
  for (const auto& name : BuiltinGameNames()) {
    const GameSpec game = BuiltinGame(name);
    const GameSpec again = ParseGame(SerializeGame(game));
    CHECK_MESSAGE(again == game, name);
  }
}

TEST_CASE("file parser rejects unknown fields and bad entries") {
  const std::string good = R"({
    "states": ["s"], "actions1": ["a"], "actions2": ["b"], "initial": "s",
    "payoff": [[["1/2"]]], "transition": [[[{"s": 1}]]]})";
  CHECK(ParseGame(good).ExactPayoff(0, 0, 0) == Rational(1, 2));
  std::string extra = good;
  extra.insert(1, "\"colour\": 1,");
  CHECK(CodeOf([&] { ParseGame(extra); }) == ErrorCode::kParseError);
  const std::string bad_payoff = R"({
    "states": ["s"], "actions1": ["a"], "actions2": ["b"], "initial": "s",
    "payoff": [[["x"]]], "transition": [[[{"s": 1}]]]})";
  try {
    ParseGame(bad_payoff);
    FAIL("accepted a bad payoff");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("payoff[0][0][0]") != std::string::npos);
  }
  const std::string bad_state = R"({
    "states": ["s"], "actions1": ["a"], "actions2": ["b"], "initial": "s",
    "payoff": [[[0]]], "transition": [[[{"t": 1}]]]})";
  CHECK(CodeOf([&] { ParseGame(bad_state); }) == ErrorCode::kIndexOutOfRange);
}

TEST_CASE("evaluation weights are normalized") {
  for (const Evaluation& e :
       {Evaluation::Discounted(0.3), Evaluation::Uniform(7),
        Evaluation::Power(0.5, 50), Evaluation::Power(2.0, 5000),
        Evaluation::Explicit({1, 2, 3, 0, 4})}) {
    double total = 0.0;
    for (Stage m = 1; m <= e.Horizon(); ++m) total += e.Weight(m);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(e.PartialSum(e.Horizon()) == doctest::Approx(total).epsilon(1e-10));
  }
}

TEST_CASE("power partial sums match direct summation") {
  for (double alpha : {0.5, 1.5, 3.0}) {
    const Stage t = 100000;
    const Evaluation e = Evaluation::Power(alpha, t);
    long double norm = 0.0L;
    for (Stage j = 1; j <= t; ++j) norm += std::pow((long double)j, alpha - 1.0L);
    long double partial = 0.0L;
    for (Stage m = 1; m <= t; ++m) {
      partial += std::pow((long double)(t - m + 1), alpha - 1.0L) / norm;
      if (m % 9973 == 0 || m == t) {
        CHECK(e.PartialSum(m) == doctest::Approx((double)partial).epsilon(1e-10));
      }
    }
  }
  const Evaluation n = Evaluation::PowerWithNorm(0.5, 1e-4);
  CHECK(n.NormInf() <= 1e-4);
  CHECK(Evaluation::Power(0.5, n.Horizon() - 1).NormInf() > 1e-4);
}

TEST_CASE("clock and effective discount closed forms") {
  const Evaluation u = Evaluation::Uniform(1000);
  for (double t : {0.0, 0.001, 0.25, 0.5, 0.9995, 1.0}) {
    const Stage expect = t == 0.0 ? 1 : static_cast<Stage>(std::ceil(t * 1000 - 1e-9));
    CHECK(Clock(u, t) == expect);
  }
  CHECK(EffectiveDiscount(u, 1) == doctest::Approx(1e-3));
  CHECK(EffectiveDiscount(u, 1000) == 1.0);
  CHECK(CodeOf([&] { EffectiveDiscount(u, 1001); }) ==
        ErrorCode::kExhaustedEvaluation);

  const Evaluation d = Evaluation::Discounted(0.01);
  for (double t : {0.1, 0.5, 0.9}) {
    const Stage expect =
        static_cast<Stage>(std::ceil(std::log1p(-t) / std::log1p(-0.01) - 1e-9));
    CHECK(Clock(d, t) == expect);
  }
  CHECK(EffectiveDiscount(d, 12345) == 0.01);
  CHECK(CodeOf([&] { Clock(d, 1.5); }) == ErrorCode::kTOutOfRange);

  const Evaluation p = Evaluation::Power(0.5, 400);
  for (Stage m : {1, 200, 399, 400}) {
    CHECK(EffectiveDiscount(p, m) ==
          doctest::Approx(p.Weight(m) / p.SuffixSum(m)).epsilon(1e-12));
  }
}

TEST_CASE("evaluation descriptors parse") {
  CHECK(Evaluation::Parse("uniform:100").Horizon() == 100);
  CHECK(Evaluation::Parse("discounted:0.25").lambda() == 0.25);
  CHECK(Evaluation::Parse("power:0.5,10").alpha() == 0.5);
  CHECK(CodeOf([] { Evaluation::Parse("uniform:-3"); }) == ErrorCode::kParseError);
  CHECK(CodeOf([] { Evaluation::Parse("geometric:2"); }) == ErrorCode::kParseError);
  const Evaluation exact = Evaluation::ExplicitExact({Rational(1), Rational(3)});
  REQUIRE(exact.exact_weights() != nullptr);
  CHECK((*exact.exact_weights())[1] == Rational(3, 4));
}

TEST_CASE("induced stage data matches a hand product") {
  const GameSpec g = BuiltinGame("big_match");
  StationaryProfile p;
  p.x = {{0.25, 0.75}, {1, 0}, {1, 0}};
  p.y = {{0.5, 0.5}, {1, 0}, {1, 0}};
  const StageData s = InducedStageData(g, p);
  CHECK(s.kernel(0, 0) == doctest::Approx(0.75));
  CHECK(s.kernel(0, 1) == doctest::Approx(0.125));
  CHECK(s.kernel(0, 2) == doctest::Approx(0.125));
  CHECK(s.payoff[0] == doctest::Approx(0.25 * 0.5 + 0.75 * 0.5));
  ExactProfile q;
  q.x = {{Rational(1, 4), Rational(3, 4)}, {1, 0}, {1, 0}};
  q.y = {{Rational(1, 2), Rational(1, 2)}, {1, 0}, {1, 0}};
  CHECK(InducedStageDataExact(g, q).kernel[0][1] == Rational(1, 8));
  p.x[0] = {0.5, 0.6};
  CHECK_THROWS_AS(ValidateProfile(g, p), Error);
}

}  // namespace
}  // namespace cpayoff
