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

#include "cpayoff/limit_theory.h"

#include <algorithm>
#include <cmath>

#include "cpayoff/error.h"
#include "cpayoff/structure_checks.h"

namespace cpayoff {
namespace {

constexpr double kEndGap = 1e-9;
constexpr double kMarginalFloor = 1e-12;

void CheckWindow(double t, double h) {
  if (!(t >= 0.0 && h > 0.0 && t + h < 1.0)) {
    throw Error(ErrorCode::kWindowOutOfRange,
                "window must satisfy 0 <= t < t+h < 1");
  }
}

bool IsOne(double e) { return std::abs(e - 1.0) <= 1e-12; }

}  // namespace

std::string ExtendedReal::ToString() const {
  return diverges ? std::string("diverges") : std::to_string(value);
}

ExtendedReal WindowDiscountLimit(double e, double t, double h) {
  CheckWindow(t, h);
  if (!(e >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "e must be >= 0");
  if (IsOne(e)) return ExtendedReal::Finite(std::log((1.0 - t) / (1.0 - t - h)));
  if (e < 1.0) return ExtendedReal::Diverges();
  return ExtendedReal::Finite(0.0);
}

double WindowDiscountSum(const Evaluation& eval, double e, double t,
                          double h) {
  CheckWindow(t, h);
  const Stage m0 = Clock(eval, t), m1 = Clock(eval, t + h);
  double sum = 0.0;
  for (Stage m = m0; m <= m1; ++m) {
    const double lambda = EffectiveDiscount(eval, m);
    sum += e == 0.0 ? 1.0 : IsOne(e) ? lambda : std::pow(lambda, e);
  }
  return sum;
}

double SurvivalProbability(double c, Exponent e, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kTOutOfRange, "t must lie in [0,1]");
  }
  if (c == 0.0 || e > kExponentOne) return 1.0;
  if (e == kExponentOne) return std::pow(1.0 - t, c);
  return t == 0.0 ? 1.0 : 0.0;
}

double IntegratedSurvival(double c, Exponent e, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kTOutOfRange, "t must lie in [0,1]");
  }
  if (c == 0.0 || e > kExponentOne) return t;
  if (e == kExponentOne) return (1.0 - std::pow(1.0 - t, c + 1.0)) / (c + 1.0);
  return 0.0;
}

Eigen::VectorXd AbsorbingLimitLaw::Marginal(double t) const {
  const double p = SurvivalProbability(c, e, t);
  Eigen::VectorXd out = (1.0 - p) * exit_distribution;
  out[live] = p;
  return out;
}

Eigen::VectorXd AbsorbingLimitLaw::Occupation(double t) const {
  const double stay = IntegratedSurvival(c, e, t);
  Eigen::VectorXd out = (t - stay) * exit_distribution;
  out[live] = stay;
  return out;
}

AbsorbingLimitLaw BuildAbsorbingLimitLaw(const GameSpec& game,
                                         const PuiseuxExpansion& expansion) {
  const std::optional<int> live = IsAbsorbing(game);
  if (!live) {
    throw Error(ErrorCode::kNotAbsorbing,
                "game does not have exactly one non-absorbing state");
  }
  const int n = game.num_states();
  AbsorbingLimitLaw law;
  law.live = *live;
  law.exit_distribution = Eigen::VectorXd::Zero(n);
  law.limit_payoff = Eigen::VectorXd::Zero(n);
  std::vector<LeadingTerm> exits(n);
  bool any = false;
  for (int l = 0; l < n; ++l) {
    if (l == law.live) continue;
    exits[l] = TransitionLeadingTerm(game, expansion, law.live, l);
    if (exits[l].coefficient == 0.0) continue;
    if (!any || exits[l].exponent < law.e) law.e = exits[l].exponent;
    any = true;
  }
  for (int l = 0; l < n; ++l) {
    if (l != law.live && exits[l].coefficient > 0.0 &&
        exits[l].exponent == law.e) {
      law.c += exits[l].coefficient;
    }
  }
  if (law.c > 0.0) {
    for (int l = 0; l < n; ++l) {
      if (l != law.live && exits[l].coefficient > 0.0 &&
          exits[l].exponent == law.e) {
        law.exit_distribution[l] = exits[l].coefficient / law.c;
      }
    }
  }
  for (int l = 0; l < n; ++l) {
    law.limit_payoff[l] = LimitStagePayoff(game, expansion, l);
  }
  return law;
}

TrajectoryCurve AbsorbingLimitCurve(const AbsorbingLimitLaw& law,
                                    const std::vector<double>& grid) {
  TrajectoryCurve curve;
  curve.grid = grid;
  for (double t : grid) {
    curve.stages.push_back(0);
    curve.marginal.push_back(law.Marginal(t));
    curve.occupation.push_back(law.Occupation(t));
    curve.gamma.push_back(curve.occupation.back().dot(law.limit_payoff));
  }
  return curve;
}

Eigen::MatrixXd MatrixExponential(const Eigen::MatrixXd& a) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0,
                                 7771770303897600.0,  1187353796428800.0,
                                 129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,
                                 1323241920.0,        40840800.0,
                                 960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double kTheta13 = 5.371920351148152;
  const int n = static_cast<int>(a.rows());
  if (n != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix must be square");
  }
  if (n == 0) return a;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  const Eigen::MatrixXd x = a / std::ldexp(1.0, squarings);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
  const Eigen::MatrixXd u =
      x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 +
           b[5] * x4 + b[3] * x2 + b[1] * id);
  const Eigen::MatrixXd v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) +
                            b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;
  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

Eigen::MatrixXd CriticalMarginal(const Eigen::MatrixXd& a, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kTOutOfRange, "t must lie in [0,1]");
  }
  const double rest = std::max(1.0 - t, kMarginalFloor);
  return MatrixExponential(-std::log(rest) * a);
}

Eigen::MatrixXd CriticalOccupationIncrement(const Eigen::MatrixXd& a,
                                            double t0, double t1,
                                            const QuadratureOptions& options) {
  if (!(t0 >= 0.0 && t0 <= t1 && t1 < 1.0)) {
    throw Error(ErrorCode::kTOutOfRange,
                "quadrature interval must satisfy 0 <= t0 <= t1 < 1");
  }
  const int n = static_cast<int>(a.rows());
  if (t0 == t1) return Eigen::MatrixXd::Zero(n, n);
  auto simpson = [&](int panels) {
    const double step = (t1 - t0) / panels;
    Eigen::MatrixXd sum = CriticalMarginal(a, t0) + CriticalMarginal(a, t1);
    for (int p = 1; p < panels; ++p) {
      sum += (p % 2 == 1 ? 4.0 : 2.0) * CriticalMarginal(a, t0 + p * step);
    }
    return Eigen::MatrixXd(sum * (step / 3.0));
  };
  int panels = std::max(2, options.initial_panels + options.initial_panels % 2);
  Eigen::MatrixXd previous = simpson(panels);
  while (panels * 2 <= options.max_panels) {
    panels *= 2;
    Eigen::MatrixXd current = simpson(panels);
    const double change = (current - previous).cwiseAbs().maxCoeff();
    if (change <= options.tolerance) return current;
    previous = std::move(current);
  }
  throw Error(ErrorCode::kQuadratureNotConverged,
              "no convergence on [" + std::to_string(t0) + ", " +
                  std::to_string(t1) + "] with " + std::to_string(panels) +
                  " panels");
}

Eigen::MatrixXd CriticalOccupation(const Eigen::MatrixXd& a, double t,
                                   const QuadratureOptions& options) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kTOutOfRange, "t must lie in [0,1]");
  }
  const double end = std::min(t, 1.0 - kEndGap);
  Eigen::MatrixXd out = CriticalOccupationIncrement(a, 0.0, end, options);
  if (t > end) out += (t - end) * CriticalMarginal(a, end);
  return out;
}

TrajectoryCurve CriticalLimitCurve(const Eigen::MatrixXd& a,
                                   const Eigen::VectorXd& g0,
                                   const std::vector<double>& grid, int initial,
                                   const QuadratureOptions& options) {
  const int n = static_cast<int>(a.rows());
  if (g0.size() != n || initial < 0 || initial >= n) {
    throw Error(ErrorCode::kDimensionMismatch, "critical curve inputs");
  }
  TrajectoryCurve curve;
  curve.grid = grid;
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(n, n);
  double reached = 0.0;
  for (double t : grid) {
    if (t < reached) {
      throw Error(ErrorCode::kInvalidArgument, "grid must be sorted");
    }
    const double end = std::min(t, 1.0 - kEndGap);
    if (end > reached) {
      pi += CriticalOccupationIncrement(a, reached, end, options);
      reached = end;
    }
    Eigen::MatrixXd total = pi;
    if (t > end) total += (t - end) * CriticalMarginal(a, end);
    curve.stages.push_back(0);
    curve.marginal.push_back(CriticalMarginal(a, t).row(initial).transpose());
    curve.occupation.push_back(total.row(initial).transpose());
    curve.gamma.push_back(total.row(initial).dot(g0));
  }
  return curve;
}

Eigen::VectorXd CriticalSecondDerivative(const Eigen::MatrixXd& a,
                                         const Eigen::VectorXd& g0, double t) {
  if (!(t >= 0.0 && t < 1.0)) {
    throw Error(ErrorCode::kTOutOfRange, "t must lie in [0,1)");
  }
  return CriticalMarginal(a, t) * (a * g0) / (1.0 - t);
}

LinearityReport LinearityCheck(const TrajectoryCurve& curve, double value,
                               double tolerance) {
  LinearityReport report;
  const auto& t = curve.grid;
  const auto& g = curve.gamma;
  for (size_t i = 0; i < t.size(); ++i) {
    const double err = std::abs(g[i] - t[i] * value);
    if (err > report.sup_error) {
      report.sup_error = err;
      report.worst_t = t[i];
    }
  }
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    const double left = t[i] - t[i - 1], right = t[i + 1] - t[i];
    if (left <= 0.0 || right <= 0.0) continue;
    const double dd = 2.0 *
                      ((g[i + 1] - g[i]) / right - (g[i] - g[i - 1]) / left) /
                      (left + right);
    report.second_difference = std::max(report.second_difference, std::abs(dd));
  }
  report.is_linear = report.sup_error <= tolerance;
  return report;
}

double CurveDistance(const TrajectoryCurve& a, const TrajectoryCurve& b) {
  if (a.grid.size() != b.grid.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "curves use different grids");
  }
  double d = 0.0;
  for (size_t i = 0; i < a.grid.size(); ++i) {
    if (std::abs(a.grid[i] - b.grid[i]) > 1e-12) {
      throw Error(ErrorCode::kDimensionMismatch, "curves use different grids");
    }
    d = std::max(d, std::abs(a.gamma[i] - b.gamma[i]));
  }
  return d;
}

}  // namespace cpayoff
