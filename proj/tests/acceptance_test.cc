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

// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpayoff/builtin_games.h"
#include "cpayoff/discounted_solver.h"
#include "cpayoff/error.h"
#include "cpayoff/experiment.h"
#include "cpayoff/limit_theory.h"
#include "cpayoff/matrix_solver.h"
#include "cpayoff/puiseux.h"
#include "cpayoff/structure_checks.h"
#include "cpayoff/trajectory.h"
#include "hypothesis_oracle.h"
#include "random_games.h"

namespace cpayoff {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed condition; returns `ok` for chaining.
  bool Expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
    return ok;
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // <= 0: no runtime bound
  std::function<void(Outcome&)> run;
};

const std::vector<double> kFitLadder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
const std::vector<std::string> kFamilies = {"discounted", "uniform", "power"};

// The leading-term family and limit model of a builtin, fitted once.
struct Fixture {
  GameSpec game;
  PuiseuxExpansion expansion;
  StrategyFamily family;
  LimitModel model;
};

const Fixture& GetFixture(const std::string& name) {
  static std::map<std::string, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[name];
  if (!slot) {
    GameSpec game = BuiltinGame(name);
    PuiseuxExpansion e = FitExpansion(SolveLadder(game, kFitLadder));
    StrategyFamily family = StrategyFamily::LeadingTerm(game, e);
    LimitModel model = BuildLimitModel(game, e);
    slot.reset(new Fixture{game, e, family, model});
  }
  return *slot;
}

void BigMatchValue(Outcome& out) {
  const GameSpec g = BuiltinGame("big_match");
  double worst = 0.0;
  for (double lambda : {1e-1, 1e-2, 1e-3, 1e-4}) {
    worst = std::max(worst, std::abs(SolveDiscounted(g, lambda).values[0] - 0.5));
  }
  out.detail << "max |v - 1/2| = " << worst << " ";
  out.Expect(worst <= 1e-9, "value error");
}

void PuiseuxRecovery(Outcome& out) {
  const GameSpec g = BuiltinGame("big_match");
  const PuiseuxExpansion e = FitExpansion(SolveLadder(g, kFitLadder));
  const PuiseuxTerm top = e.p1[0][0], left = e.p2[0][0];
  out.detail << "Top (" << top.coefficient << ", " << top.exponent.ToString()
             << ") Left (" << left.coefficient << ", "
             << left.exponent.ToString() << ") ";
  out.Expect(top.exponent == kExponentOne, "Top exponent");
  out.Expect(std::abs(top.coefficient - 1.0) <= 1e-3, "Top coefficient");
  out.Expect(left.exponent == kExponentZero, "Left exponent");
  out.Expect(std::abs(left.coefficient - 0.5) <= 1e-3, "Left coefficient");
}

void ConstantPayoff(Outcome& out) {
  for (const char* name : {"big_match", "absorbing3"}) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig config;
    config.game = name;
    const VerifyResult r = RunVerify(config);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    out.detail << name << " (" << secs << " s):";
    out.Expect(secs <= 60.0, std::string(name) + " runtime");
    for (const std::string& family : kFamilies) {
      double previous = 1e300, last = 0.0;
      bool monotone = true;
      for (const SummaryRow& row : r.rows) {
        if (row.family != family) continue;
        monotone &= row.sup_error <= previous;
        previous = last = row.sup_error;
      }
      out.detail << " " << family << " " << last;
      out.Expect(monotone, std::string(name) + " " + family + " monotone");
      out.Expect(last <= 0.02, std::string(name) + " " + family + " final");
    }
    out.detail << "; ";
  }
}

void FamilyIndependence(Outcome& out) {
  const std::vector<double> grid = UniformGrid(101);
  for (const char* name : {"big_match", "absorbing3"}) {
    const Fixture& f = GetFixture(name);
    std::vector<TrajectoryCurve> curves;
    for (const std::string& family : kFamilies) {
      curves.push_back(PropagateExact(f.family, FamilyWithNorm(family, 1e-4), grid));
    }
    double worst = 0.0;
    for (size_t a = 0; a < curves.size(); ++a)
      for (size_t b = a + 1; b < curves.size(); ++b)
        worst = std::max(worst, CurveDistance(curves[a], curves[b]));
    out.detail << name << " max pairwise " << worst << "; ";
    out.Expect(worst <= 0.03, name);
  }
}

void WindowSums(Outcome& out) {
  const Evaluation uni = Evaluation::Uniform(1000000);
  const std::vector<std::pair<double, double>> windows = {
      {0.0, 0.5}, {0.25, 0.5}, {0.5, 0.25}};
  double worst = 0.0, high = 0.0;
  for (const auto& [t, h] : windows) {
    worst = std::max(worst, std::abs(WindowDiscountSum(uni, 1.0, t, h) -
                                     WindowDiscountLimit(1.0, t, h).value));
    high = std::max(high, WindowDiscountSum(uni, 1.5, t, h));
  }
  out.detail << "e=1 max error " << worst << ", e=1.5 max sum " << high;
  out.Expect(worst <= 1e-3, "e = 1");
  out.Expect(high <= 1e-2, "e = 1.5");
  // e = 1/2 on horizons 10^4, 10^6, 10^8: growing, above 10^3 at the end.
  double low = 1e300;
  for (const auto& [t, h] : windows) {
    double previous = 0.0, sum = 0.0;
    for (Stage horizon : {Stage{10000}, Stage{1000000}, Stage{100000000}}) {
      sum = WindowDiscountSum(Evaluation::Uniform(horizon), 0.5, t, h);
      out.Expect(sum > previous, "e = 1/2 growth");
      previous = sum;
    }
    low = std::min(low, sum);
  }
  out.detail << ", e=0.5 min sum at 1e8 " << low;
  out.Expect(low > 1e3, "e = 1/2");
}

void Survival(Outcome& out) {
  const Fixture& f = GetFixture("big_match");
  const std::vector<double> grid = UniformGrid(101);
  for (const std::string& family : kFamilies) {
    const TrajectoryCurve c = PropagateExact(f.family, FamilyWithNorm(family, 1e-4), grid);
    double worst = 0.0;
    for (size_t g = 0; g < grid.size(); ++g) {
      worst = std::max(worst, std::abs(c.marginal[g][0] - (1.0 - grid[g])));
    }
    out.detail << family << " " << worst << " ";
    out.Expect(worst <= 0.01, family);
  }
}

void Occupation(Outcome& out) {
  const std::vector<double> grid = UniformGrid(21);
  const Evaluation uni = Evaluation::Uniform(100000);
  for (const char* name : {"big_match", "critical2"}) {
    const Fixture& f = GetFixture(name);
    const auto a = CriticalityCheck(f.game, f.expansion);
    if (!out.Expect(a.has_value(), std::string(name) + " critical")) continue;
    const int n = f.game.num_states();
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      const TrajectoryCurve c = PropagateExact(f.family, uni, grid, k);
      for (size_t g = 0; g < grid.size(); ++g) {
        const Eigen::VectorXd row = CriticalOccupation(*a, grid[g]).row(k);
        worst = std::max(worst, (c.occupation[g] - row).cwiseAbs().maxCoeff());
      }
    }
    out.detail << name << " " << worst << "; ";
    out.Expect(worst <= 0.01, name);
  }
}

void GeneratorLimit(Outcome& out) {
  const Evaluation uni = Evaluation::Uniform(100000);
  for (const char* name : {"big_match", "critical2"}) {
    const Fixture& f = GetFixture(name);
    const auto a = CriticalityCheck(f.game, f.expansion);
    if (!out.Expect(a.has_value(), std::string(name) + " critical")) continue;
    const Eigen::MatrixXd target = *a / 0.5;
    const Eigen::MatrixXd est = EmpiricalGenerator(f.family, uni, 0.5, 0.01);
    const double rel = (est - target).norm() / target.norm();
    out.detail << name << " relative error " << rel << "; ";
    out.Expect(rel <= 0.1, std::string(name) + " generator");
  }
  // Two-jump probabilities on windows starting at t = 0.5.
  const Fixture& f = GetFixture("critical2");
  const std::vector<double> grid = UniformGrid(41);
  const SimulationBatch batch = Simulate(f.family, uni, 100000, 20261015, grid);
  const size_t g0 = batch.GridIndex(0.5);
  std::vector<double> ratio;
  for (double h : {0.1, 0.05, 0.025}) {
    const double p = batch.FractionWithJumps(g0, batch.GridIndex(0.5 + h), 2);
    ratio.push_back(p / h);
    out.detail << "P(J>=2)/h at h=" << h << ": " << p / h << " ";
  }
  out.Expect(ratio[2] > 0.0 && ratio[0] >= 2.0 * ratio[2], "two-jump o(h)");
}

void StructuralChecks(Outcome& out) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> states(1, 4);
  int disagreements = 0, violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    // Alternate dense and very sparse supports so both verdicts occur.
    const GameSpec g = RandomGame(rng, states(rng), 3, 3, trial % 2 ? 0.95 : 0.6);
    for (bool p1 : {true, false}) {
      const HypothesisReport fast = p1 ? CheckH1(g) : CheckH2(g);
      const HypothesisReport slow = BruteForceHypothesis(g, p1);
      disagreements += fast.holds != slow.holds || fast.witness != slow.witness;
      violations += !fast.holds;
    }
  }
  out.detail << disagreements << " disagreements, " << violations
             << " violations in 400 checks; ";
  out.Expect(disagreements == 0, "brute force agreement");
  const HypothesisReport cycle = CheckH1(BuiltinGame("cycle3"));
  out.Expect(!cycle.holds && cycle.witness.has_value(), "cycle3 witness");
  if (cycle.witness) out.detail << "cycle3 " << cycle.witness->ToString();
  for (const char* name : {"big_match", "absorbing3", "two_state"}) {
    const GameSpec g = BuiltinGame(name);
    out.Expect(CheckH1(g).holds && CheckH2(g).holds, name);
  }
}

void Invariants(Outcome& out) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> entry(-10.0, 10.0);
  std::uniform_int_distribution<int> size(1, 8);
  double gap = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::MatrixXd m(size(rng), size(rng));
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) m(r, c) = entry(rng);
    const MatrixGameSolution s = SolveMatrixGame(m);
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(s.x_opt.data(), m.rows());
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(s.y_opt.data(), m.cols());
    gap = std::max(gap, (m * y).maxCoeff() - (x.transpose() * m).minCoeff());
  }
  out.detail << "duality gap " << gap;
  out.Expect(gap <= 1e-10, "duality gap");

  std::normal_distribution<double> noise(0.0, 3.0);
  double excess = -1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const GameSpec g = RandomGame(rng, 2 + trial % 4, 3, 3);
    const double lambda = 0.01 + 0.98 * (trial % 10) / 9.0;
    Eigen::VectorXd v(g.num_states()), w(g.num_states());
    for (int k = 0; k < g.num_states(); ++k) {
      v[k] = noise(rng);
      w[k] = noise(rng);
    }
    const double lhs =
        (ShapleyOperator(g, lambda, v) - ShapleyOperator(g, lambda, w)).cwiseAbs().maxCoeff();
    excess = std::max(excess, lhs - (1 - lambda) * (v - w).cwiseAbs().maxCoeff());
  }
  out.detail << ", contraction excess " << excess;
  out.Expect(excess <= 1e-12, "contraction");

  const Fixture& a3 = GetFixture("absorbing3");
  const TrajectoryCurve long_run =
      PropagateExact(a3.family, Evaluation::Uniform(1000000), UniformGrid(11));
  double drift = 0.0;
  for (const auto& m : long_run.marginal) drift = std::max(drift, std::abs(m.sum() - 1.0));
  out.detail << ", mass drift " << drift;
  out.Expect(drift <= 1e-9, "mass drift");

  const int n = 100000;
  const std::vector<double> grid = UniformGrid(11);
  const Evaluation uni = Evaluation::Uniform(10000);
  int outside = 0;
  for (const char* name : {"big_match", "critical2"}) {
    const Fixture& f = GetFixture(name);
    const SimulationBatch batch = Simulate(f.family, uni, n, 7, grid);
    const TrajectoryCurve exact = PropagateExact(f.family, uni, grid);
    for (size_t g = 0; g < grid.size(); ++g) {
      const Eigen::VectorXd freq = batch.Frequencies(g);
      for (int k = 0; k < f.game.num_states(); ++k) {
        const double p = exact.marginal[g][k];
        outside += std::abs(freq[k] - p) > 3.0 * std::sqrt(p * (1 - p) / n) + 1e-12;
      }
    }
  }
  out.detail << ", " << outside << " marginals outside 3 sigma";
  out.Expect(outside == 0, "Monte Carlo envelope");
}

}  // namespace
}  // namespace cpayoff

int main() {
  using cpayoff::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "big match discounted value", 1.0, cpayoff::BigMatchValue},
      {2, "puiseux recovery", 5.0, cpayoff::PuiseuxRecovery},
      {3, "constant-payoff convergence", 0.0, cpayoff::ConstantPayoff},
      {4, "evaluation-family independence", 0.0, cpayoff::FamilyIndependence},
      {5, "window sums of effective discounts", 30.0, cpayoff::WindowSums},
      {6, "survival law", 0.0, cpayoff::Survival},
      {7, "occupation measure", 0.0, cpayoff::Occupation},
      {8, "generator limit and two-jump windows", 0.0, cpayoff::GeneratorLimit},
      {9, "structural checks", 10.0, cpayoff::StructuralChecks},
      {10, "invariant suites", 0.0, cpayoff::Invariants},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    cpayoff::Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "[exception: " << e.what() << "]";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      out.pass = false;
      out.detail << "[over the " << c.budget_seconds << " s budget]";
    }
    failed += !out.pass;
    std::printf("%s %d %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), secs, out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
