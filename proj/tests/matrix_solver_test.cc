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

#include <random>

#include "doctest.h"
#include "cpayoff/matrix_solver.h"

namespace cpayoff {
namespace {

// Certificate check written directly from the minimax definition.
void CheckCertificate(const Eigen::MatrixXd& a, const MatrixGameSolution& s,
                      double tol) {
  const Eigen::Map<const Eigen::VectorXd> x(s.x_opt.data(), s.x_opt.size());
  const Eigen::Map<const Eigen::VectorXd> y(s.y_opt.data(), s.y_opt.size());
  CHECK(x.minCoeff() >= 0.0);
  CHECK(y.minCoeff() >= 0.0);
  CHECK(x.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(y.sum() == doctest::Approx(1.0).epsilon(1e-12));
  const double guarantee1 = (x.transpose() * a).minCoeff();
  const double guarantee2 = (a * y).maxCoeff();
  CHECK(guarantee1 >= s.value - tol);
  CHECK(guarantee2 <= s.value + tol);
}

TEST_CASE("rock paper scissors") {
  Eigen::MatrixXd rps(3, 3);
  rps << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  const MatrixGameSolution s = SolveMatrixGame(rps);
  CHECK(s.value == doctest::Approx(0.0).epsilon(1e-12));
  for (int a = 0; a < 3; ++a) {
    CHECK(s.x_opt[a] == doctest::Approx(1.0 / 3).epsilon(1e-10));
    CHECK(s.y_opt[a] == doctest::Approx(1.0 / 3).epsilon(1e-10));
  }
}

TEST_CASE("2x2 closed form and saddle points") {
  Eigen::MatrixXd a(2, 2);
  a << 3, -1, -2, 4;
  // No saddle point: v = (ad - bc) / (a + d - b - c).
  const MatrixGameSolution s = SolveMatrixGame(a);
  CHECK(s.value == doctest::Approx((3.0 * 4 - 2) / (3 + 4 + 1 + 2)));
  CHECK(s.x_opt[0] == doctest::Approx(6.0 / 10));
  Eigen::MatrixXd saddle(2, 3);
  saddle << 5, 1, 3, 4, 2, 6;
  const MatrixGameSolution t = SolveMatrixGame(saddle);
  CHECK(t.value == doctest::Approx(2.0));
  CHECK(t.x_opt[1] == doctest::Approx(1.0));
  CHECK(t.y_opt[1] == doctest::Approx(1.0));
}

TEST_CASE("exact solver agrees with the float solver") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = 1 + trial % 4, cols = 1 + (trial / 4) % 4;
    RationalMatrix exact(rows, std::vector<Rational>(cols));
    Eigen::MatrixXd a(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int v = entry(rng);
        exact[r][c] = Rational(v, 3);
        a(r, c) = v / 3.0;
      }
    }
    const ExactMatrixGameSolution e = SolveMatrixGameExact(exact);
    CHECK(e.duality_gap == 0);
    const MatrixGameSolution f = SolveMatrixGame(a);
    CHECK(f.value == doctest::Approx(ToDouble(e.value)).epsilon(1e-12));
  }
}

TEST_CASE("random matrices carry valid certificates") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> entry(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + trial % 6, cols = 1 + (trial / 6) % 6;
    Eigen::MatrixXd a(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) a(r, c) = entry(rng);
    const MatrixGameSolution s = SolveMatrixGame(a);
    CHECK(s.duality_gap <= 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    CheckCertificate(a, s, 1e-9);
    // A warm start from the final basis reaches the same value.
    const MatrixGameSolution w = SolveMatrixGame(a, &s.basis);
    CHECK(w.value == doctest::Approx(s.value).epsilon(1e-12));
  }
}

TEST_CASE("degenerate and constant matrices") {
  const MatrixGameSolution c = SolveMatrixGame(Eigen::MatrixXd::Constant(3, 4, -7.5));
  CHECK(c.value == doctest::Approx(-7.5));
  Eigen::MatrixXd ties(3, 3);
  ties << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  const MatrixGameSolution t = SolveMatrixGame(ties);
  CheckCertificate(ties, t, 1e-10);
  CHECK(t.value == doctest::Approx(0.5));
}

}  // namespace
}  // namespace cpayoff
