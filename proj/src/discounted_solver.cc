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

#include "cpayoff/discounted_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpayoff/error.h"
#include "cpayoff/matrix_solver.h"

namespace cpayoff {
namespace {

struct Sweep {
  Eigen::VectorXd values;
  StationaryProfile profile;
  BasisHints bases;
};

Sweep ShapleySweep(const GameSpec& game, double lambda, const Eigen::VectorXd& v,
                   const BasisHints* hints) {
  const int n = game.num_states();
  Sweep out{Eigen::VectorXd(n), {}, BasisHints(n)};
  out.profile.x.resize(n);
  out.profile.y.resize(n);
  for (int k = 0; k < n; ++k) {
    const std::vector<int>* hint =
        hints != nullptr && static_cast<int>(hints->size()) == n ? &(*hints)[k]
                                                                 : nullptr;
    MatrixGameSolution s = SolveMatrixGame(AuxiliaryMatrix(game, lambda, v, k), hint);
    out.values[k] = s.value;
    out.profile.x[k] = std::move(s.x_opt);
    out.profile.y[k] = std::move(s.y_opt);
    out.bases[k] = std::move(s.basis);
  }
  return out;
}

// Discounted payoff of a stationary profile: (I - (1-lambda) Q)^-1 lambda g.
Eigen::VectorXd EvaluateProfile(const GameSpec& game, double lambda,
                                const StationaryProfile& profile) {
  StageData data = InducedStageData(game, profile);
  const int n = game.num_states();
  Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(n, n) - (1.0 - lambda) * data.kernel;
  return system.partialPivLu().solve(lambda * data.payoff);
}

}  // namespace

Eigen::MatrixXd AuxiliaryMatrix(const GameSpec& game, double lambda,
                                const Eigen::VectorXd& v, int k) {
  if (v.size() != game.num_states()) {
    throw Error(ErrorCode::kDimensionMismatch, "value vector has wrong size");
  }
  Eigen::MatrixXd aux(game.num_actions1(), game.num_actions2());
  for (int i = 0; i < game.num_actions1(); ++i) {
    for (int j = 0; j < game.num_actions2(); ++j) {
      double continuation = 0.0;
      for (int l = 0; l < game.num_states(); ++l) {
        continuation += game.Transition(k, i, j, l) * v[l];
      }
      aux(i, j) = lambda * game.Payoff(k, i, j) + (1.0 - lambda) * continuation;
    }
  }
  return aux;
}

Eigen::VectorXd ShapleyOperator(const GameSpec& game, double lambda,
                                const Eigen::VectorXd& v) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "discount must lie in (0,1]");
  }
  return ShapleySweep(game, lambda, v, nullptr).values;
}

double DefaultTolerance(const GameSpec& game) {
  return 1e-12 * std::max(1.0, game.MaxAbsPayoff());
}

DiscountedSolution SolveDiscounted(const GameSpec& game, double lambda,
                                   const DiscountedOptions& options) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "discount must lie in (0,1]");
  }
  const double tol =
      options.tolerance > 0.0 ? options.tolerance : DefaultTolerance(game);
  const double scale = 2.0 * std::max(1.0, game.MaxAbsPayoff());
  const double budget =
      lambda == 1.0 ? 1.0
                    : std::ceil(std::log(tol / scale) / std::log1p(-lambda));
  const long max_iterations = static_cast<long>(std::max(1.0, budget)) + 10;

  Eigen::VectorXd v = Eigen::VectorXd::Zero(game.num_states());
  const BasisHints* hints = options.warm_start;
  BasisHints last;
  for (long it = 1; it <= max_iterations; ++it) {
    Sweep sweep = ShapleySweep(game, lambda, v, hints);
    const double residual = (sweep.values - v).lpNorm<Eigen::Infinity>();
    if (residual <= tol) {
      return {lambda, v, std::move(sweep.profile), residual,
              static_cast<int>(it), std::move(sweep.bases)};
    }
    Eigen::VectorXd next = sweep.values;
    if (options.policy_jumps) {
      Eigen::VectorXd candidate = EvaluateProfile(game, lambda, sweep.profile);
      Sweep check = ShapleySweep(game, lambda, candidate, &sweep.bases);
      const double candidate_residual =
          (check.values - candidate).lpNorm<Eigen::Infinity>();
      if (candidate.allFinite() && candidate_residual < (1.0 - lambda) * residual) {
        if (candidate_residual <= tol) {
          return {lambda, candidate, std::move(check.profile),
                  candidate_residual, static_cast<int>(it),
                  std::move(check.bases)};
        }
        next = candidate;
      }
    }
    v = std::move(next);
    // Later sweeps start from the bases found at this discount.
    last = std::move(sweep.bases);
    hints = &last;
  }
  throw Error(ErrorCode::kMaxIterationsExceeded,
              "value iteration at lambda=" + std::to_string(lambda) +
                  " exceeded " + std::to_string(max_iterations) + " sweeps");
}

std::vector<DiscountedSolution> SolveLadder(const GameSpec& game,
                                            const std::vector<double>& ladder,
                                            double tolerance) {
  for (size_t r = 1; r < ladder.size(); ++r) {
    if (!(ladder[r] < ladder[r - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "discount ladder must be strictly decreasing");
    }
  }
  std::vector<DiscountedSolution> out;
  out.reserve(ladder.size());
  for (double lambda : ladder) {
    DiscountedOptions options;
    options.tolerance = tolerance;
    if (!out.empty()) options.warm_start = &out.back().bases;
    out.push_back(SolveDiscounted(game, lambda, options));
  }
  return out;
}

double AuxiliaryOptimalityGap(const GameSpec& game,
                              const DiscountedSolution& solution) {
  double gap = 0.0;
  for (int k = 0; k < game.num_states(); ++k) {
    Eigen::MatrixXd aux = AuxiliaryMatrix(game, solution.lambda, solution.values, k);
    Eigen::Map<const Eigen::VectorXd> x(solution.profile.x[k].data(), aux.rows());
    Eigen::Map<const Eigen::VectorXd> y(solution.profile.y[k].data(), aux.cols());
    const double v = solution.values[k];
    gap = std::max(gap, (aux * y).maxCoeff() - v);
    gap = std::max(gap, v - (aux.transpose() * x).minCoeff());
  }
  return gap;
}

LimitValueEstimate EstimateLimitValue(const GameSpec& game,
                                      const std::vector<double>& ladder) {
  if (ladder.size() < 2) {
    throw Error(ErrorCode::kLadderTooShort,
                "limit value estimation needs at least two discounts");
  }
  if (ladder.back() < 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, "smallest discount must be >= 1e-6");
  }
  std::vector<DiscountedSolution> solutions = SolveLadder(game, ladder);
  const int n = game.num_states();
  const size_t rungs = ladder.size();
  LimitValueEstimate estimate;
  for (const auto& s : solutions) estimate.ladder.emplace_back(s.lambda, s.values);
  estimate.values = solutions.back().values;

  // Extrapolates from rungs (a, b) assuming v_lambda = v + C lambda^r.
  auto extrapolate = [&](size_t a, size_t b, int k, double r) {
    const double la = std::pow(ladder[a], r), lb = std::pow(ladder[b], r);
    const double va = solutions[a].values[k], vb = solutions[b].values[k];
    return std::pair{(vb * la - va * lb) / (la - lb), (va - vb) / (la - lb)};
  };

  const double bound = game.MaxAbsPayoff();
  for (int k = 0; k < n; ++k) {
    const size_t a = rungs - 2, b = rungs - 1;
    int best_d = 1;
    if (rungs >= 3) {
      double best_err = std::numeric_limits<double>::infinity();
      for (int d = 1; d <= std::max(1, n); ++d) {
        const double r = 1.0 / d;
        auto [limit, slope] = extrapolate(a, b, k, r);
        const double predicted = limit + slope * std::pow(ladder[a - 1], r);
        const double err = std::abs(predicted - solutions[a - 1].values[k]);
        if (err < best_err) {
          best_err = err;
          best_d = d;
        }
      }
    }
    const double r = 1.0 / best_d;
    const double limit = std::clamp(extrapolate(a, b, k, r).first, -bound, bound);
    estimate.values[k] = limit;
    const double previous =
        rungs >= 3 ? std::clamp(extrapolate(a - 1, a, k, r).first, -bound, bound)
                   : solutions[b].values[k];
    estimate.extrapolation_error =
        std::max(estimate.extrapolation_error, std::abs(limit - previous));
  }
  return estimate;
}

}  // namespace cpayoff
