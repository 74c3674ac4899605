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
#include <random>

#include "doctest.h"
#include "cpayoff/builtin_games.h"
#include "cpayoff/discounted_solver.h"
#include "cpayoff/error.h"
#include "cpayoff/matrix_solver.h"
#include "random_games.h"

namespace cpayoff {
namespace {

TEST_CASE("big match closed form") {
  const GameSpec g = BuiltinGame("big_match");
  for (double lambda : {0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    const DiscountedSolution s = SolveDiscounted(g, lambda);
    CHECK(std::abs(s.values[0] - 0.5) <= 1e-10);
    CHECK(s.values[1] == doctest::Approx(1.0));
    CHECK(std::abs(s.values[2]) <= 1e-12);
    CHECK(s.profile.x[0][0] == doctest::Approx(lambda / (1 + lambda)).epsilon(1e-9));
    CHECK(s.profile.y[0][0] == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("constant and symmetric two-state values") {
  CHECK(SolveDiscounted(BuiltinGame("const5"), 0.5).values[0] ==
        doctest::Approx(5.0));
  const GameSpec two = BuiltinGame("two_state");
  for (double lambda : {0.9, 0.1, 1e-3}) {
    // Stage values 1/2 and 3/2, transitions uniform: v = lambda g + (1-lambda).
    const DiscountedSolution s = SolveDiscounted(two, lambda);
    CHECK(s.values[0] == doctest::Approx(lambda * 0.5 + (1 - lambda)).epsilon(1e-11));
    CHECK(s.values[1] == doctest::Approx(lambda * 1.5 + (1 - lambda)).epsilon(1e-11));
  }
}

TEST_CASE("shapley operator is a contraction") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const GameSpec g = RandomGame(rng, 2 + trial % 3, 2, 3);
    const double lambda = trial % 2 ? 0.05 : 0.4;
    Eigen::VectorXd v(g.num_states()), w(g.num_states());
    for (int k = 0; k < g.num_states(); ++k) {
      v[k] = noise(rng);
      w[k] = noise(rng);
    }
    const double lhs = (ShapleyOperator(g, lambda, v) - ShapleyOperator(g, lambda, w))
                           .cwiseAbs()
                           .maxCoeff();
    CHECK(lhs <= (1 - lambda) * (v - w).cwiseAbs().maxCoeff() + 1e-12);
  }
}

TEST_CASE("random games: fixed point checked by exact auxiliary games") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const GameSpec g = RandomGame(rng, 3, 2, 2);
    const double lambda = trial % 3 == 0 ? 1e-3 : 0.1;
    const DiscountedSolution s = SolveDiscounted(g, lambda);
    CHECK(AuxiliaryOptimalityGap(g, s) <= 1e-9);
    // Each state's value is the exact value of its auxiliary game at s.values.
    for (int k = 0; k < g.num_states(); ++k) {
      RationalMatrix m(2, std::vector<Rational>(2));
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          Rational cont = 0;
          for (int l = 0; l < g.num_states(); ++l) {
            cont += g.ExactTransition(k, i, j, l) * RationalFromDouble(s.values[l]);
          }
          m[i][j] = RationalFromDouble(lambda) * g.ExactPayoff(k, i, j) +
                    (1 - RationalFromDouble(lambda)) * cont;
        }
      }
      CHECK(ToDouble(SolveMatrixGameExact(m).value) ==
            doctest::Approx(s.values[k]).epsilon(1e-9));
    }
    // The profile's own payoff reproduces the values.
    const StageData st = InducedStageData(g, s.profile);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.num_states(), g.num_states());
    const Eigen::VectorXd eval =
        (id - (1 - lambda) * st.kernel).partialPivLu().solve(lambda * st.payoff);
    CHECK((eval - s.values).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("ladder warm starts agree with cold solves") {
  const GameSpec g = BuiltinGame("critical2");
  const std::vector<double> ladder = {1e-1, 1e-2, 1e-3, 1e-4};
  const auto warm = SolveLadder(g, ladder);
  for (size_t r = 0; r < ladder.size(); ++r) {
    const DiscountedSolution cold = SolveDiscounted(g, ladder[r]);
    CHECK((warm[r].values - cold.values).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK_THROWS_AS(SolveLadder(g, {1e-2, 1e-1}), Error);
}

TEST_CASE("limit value estimates") {
  const std::vector<double> ladder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const LimitValueEstimate bm = EstimateLimitValue(BuiltinGame("big_match"), ladder);
  CHECK(bm.values[0] == doctest::Approx(0.5).epsilon(1e-9));
  const LimitValueEstimate c2 = EstimateLimitValue(BuiltinGame("critical2"), ladder);
  const double golden = (std::sqrt(5.0) - 1) / 2;
  CHECK(c2.values[0] == doctest::Approx(golden).epsilon(1e-7));
  CHECK(c2.values[1] == doctest::Approx(golden * golden).epsilon(1e-7));
  try {
    EstimateLimitValue(BuiltinGame("big_match"), {1e-2});
    FAIL("single rung accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kLadderTooShort);
  }
}

}  // namespace
}  // namespace cpayoff
