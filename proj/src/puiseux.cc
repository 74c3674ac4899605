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

#include "cpayoff/puiseux.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cpayoff/error.h"
#include "cpayoff/structure_checks.h"

namespace cpayoff {
namespace {

constexpr double kSlopeJumpLimit = 0.1;

struct SeriesFit {
  double coefficient = 0.0;
  Exponent exponent;
};

// Fits c lambda^e to probabilities[0..count) of one action.
SeriesFit FitSeries(const std::vector<double>& lambdas,
                    const std::vector<double>& probabilities, size_t count,
                    int max_den, const std::string& where) {
  if (probabilities[count - 1] < kProbabilityFloor) return {};
  size_t first = count - 1;
  while (first > 0 && probabilities[first - 1] >= kProbabilityFloor) --first;
  if (count - first < 2) {
    throw Error(ErrorCode::kUnstableExponent,
                where + " appears only at the smallest discount");
  }
  std::vector<double> slopes;
  for (size_t r = first; r + 1 < count; ++r) {
    slopes.push_back(std::log(probabilities[r + 1] / probabilities[r]) /
                     std::log(lambdas[r + 1] / lambdas[r]));
  }
  for (size_t s = 0; s + 1 < slopes.size(); ++s) {
    if (std::abs(slopes[s + 1] - slopes[s]) > kSlopeJumpLimit) {
      throw Error(ErrorCode::kUnstableExponent,
                  where + " has log-log slopes " + std::to_string(slopes[s]) +
                      " then " + std::to_string(slopes[s + 1]));
    }
  }
  SeriesFit fit;
  fit.exponent = Exponent::Snap(slopes.back(), max_den);
  const double e = fit.exponent.value();
  const double a = probabilities[count - 2] / std::pow(lambdas[count - 2], e);
  const double b = probabilities[count - 1] / std::pow(lambdas[count - 1], e);
  fit.coefficient = std::sqrt(a * b);
  return fit;
}

std::vector<std::vector<PuiseuxTerm>> FitPlayer(
    const std::vector<LadderPoint>& ladder, bool player1, int max_den,
    double& worst_residual) {
  const int n = static_cast<int>(ladder.front().profile.x.size());
  std::vector<double> lambdas;
  for (const auto& point : ladder) lambdas.push_back(point.lambda);
  const size_t count = ladder.size();
  std::vector<std::vector<PuiseuxTerm>> terms(n);
  for (int k = 0; k < n; ++k) {
    const auto& first_rows = player1 ? ladder[0].profile.x : ladder[0].profile.y;
    const int actions = static_cast<int>(first_rows[k].size());
    terms[k].resize(actions);
    for (int a = 0; a < actions; ++a) {
      std::vector<double> p;
      for (const auto& point : ladder) {
        const auto& rows = player1 ? point.profile.x : point.profile.y;
        p.push_back(rows[k][a]);
      }
      const std::string where = std::string(player1 ? "player-1" : "player-2") +
                                " action " + std::to_string(a) + " in state " +
                                std::to_string(k);
      SeriesFit full = FitSeries(lambdas, p, count, max_den, where);
      PuiseuxTerm& term = terms[k][a];
      term.coefficient = full.coefficient;
      term.exponent = full.exponent;
      if (full.coefficient > 0.0 && p[count - 2] >= kProbabilityFloor &&
          p[count - 3] >= kProbabilityFloor) {
        SeriesFit held = FitSeries(lambdas, p, count - 1, max_den, where);
        const double predicted =
            held.coefficient * std::pow(lambdas[count - 1], held.exponent.value());
        term.residual = std::abs(predicted - p[count - 1]) / p[count - 1];
      }
      worst_residual = std::max(worst_residual, term.residual);
    }
  }
  return terms;
}

}  // namespace

Exponent::Exponent(long num, long den) {
  if (den <= 0 || num < 0) {
    throw Error(ErrorCode::kInvalidArgument, "exponent must be a nonnegative "
                                             "fraction with positive denominator");
  }
  const long g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Exponent Exponent::Snap(double value, int max_den) {
  if (!(value > 0.0)) return Exponent();
  long best_num = 0, best_den = 1;
  double best_err = std::abs(value);
  for (long den = 1; den <= max_den; ++den) {
    const long num = std::lround(value * den);
    const double err = std::abs(value - static_cast<double>(num) / den);
    if (err < best_err - 1e-15) {
      best_err = err;
      best_num = num;
      best_den = den;
    }
  }
  return Exponent(std::max(0L, best_num), best_den);
}

std::string Exponent::ToString() const {
  return den_ == 1 ? std::to_string(num_)
                   : std::to_string(num_) + "/" + std::to_string(den_);
}

Exponent operator+(Exponent a, Exponent b) {
  return Exponent(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

double PuiseuxTerm::Evaluate(double lambda) const {
  if (coefficient == 0.0) return 0.0;
  if (exponent == kExponentZero) return coefficient;
  if (exponent == kExponentOne) return coefficient * lambda;
  return coefficient * std::pow(lambda, exponent.value());
}

double PuiseuxExpansion::ZeroOrderMassDefect() const {
  double defect = 0.0;
  for (const auto* player : {&p1, &p2}) {
    for (const auto& row : *player) {
      double mass = 0.0;
      for (const auto& term : row) {
        if (term.coefficient > 0.0 && term.exponent == kExponentZero) {
          mass += term.coefficient;
        }
      }
      defect = std::max(defect, std::abs(mass - 1.0));
    }
  }
  return defect;
}

PuiseuxExpansion FitExpansion(const std::vector<LadderPoint>& ladder,
                              int max_den) {
  if (ladder.size() < 4) {
    throw Error(ErrorCode::kLadderTooShort,
                "Puiseux fitting needs at least four discounts, got " +
                    std::to_string(ladder.size()));
  }
  for (size_t r = 1; r < ladder.size(); ++r) {
    if (!(ladder[r].lambda > 0.0) ||
        ladder[r].lambda > 0.1 * ladder[r - 1].lambda * (1.0 + 1e-9)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ladder discounts must decrease by a factor of at least 10");
    }
  }
  PuiseuxExpansion expansion;
  expansion.p1 = FitPlayer(ladder, true, max_den, expansion.fit_residual);
  expansion.p2 = FitPlayer(ladder, false, max_den, expansion.fit_residual);
  return expansion;
}

PuiseuxExpansion FitExpansion(const std::vector<DiscountedSolution>& ladder,
                              int max_den) {
  std::vector<LadderPoint> points;
  points.reserve(ladder.size());
  for (const auto& s : ladder) points.push_back({s.lambda, s.profile});
  return FitExpansion(points, max_den);
}

StationaryProfile LeadingTermProfile(const PuiseuxExpansion& expansion,
                                     double lambda) {
  StationaryProfile profile;
  auto fill = [lambda](const std::vector<std::vector<PuiseuxTerm>>& terms,
                       std::vector<std::vector<double>>& rows) {
    rows.resize(terms.size());
    for (size_t k = 0; k < terms.size(); ++k) {
      rows[k].resize(terms[k].size());
      double total = 0.0;
      for (size_t a = 0; a < terms[k].size(); ++a) {
        rows[k][a] = std::clamp(terms[k][a].Evaluate(lambda), 0.0, 1.0);
        total += rows[k][a];
      }
      if (!(total > 0.0)) {
        throw Error(ErrorCode::kNumericalFailure,
                    "expansion has no mass in state " + std::to_string(k));
      }
      for (double& p : rows[k]) p /= total;
    }
  };
  fill(expansion.p1, profile.x);
  fill(expansion.p2, profile.y);
  return profile;
}

std::vector<int> ActionClassification::Members(
    const std::vector<ActionClass>& row, ActionClass cls) {
  std::vector<int> out;
  for (size_t a = 0; a < row.size(); ++a) {
    if (row[a] == cls) out.push_back(static_cast<int>(a));
  }
  return out;
}

ActionClass Classify(const PuiseuxTerm& term) {
  if (term.coefficient == 0.0) return ActionClass::kHigher;
  if (term.exponent == kExponentZero) return ActionClass::kZero;
  if (term.exponent < kExponentOne) return ActionClass::kFractional;
  if (term.exponent == kExponentOne) return ActionClass::kOne;
  return ActionClass::kHigher;
}

ActionClassification ClassifyActions(const PuiseuxExpansion& expansion) {
  ActionClassification out;
  auto classify = [](const std::vector<std::vector<PuiseuxTerm>>& terms) {
    std::vector<std::vector<ActionClass>> rows(terms.size());
    for (size_t k = 0; k < terms.size(); ++k) {
      for (const auto& term : terms[k]) rows[k].push_back(Classify(term));
    }
    return rows;
  };
  out.p1 = classify(expansion.p1);
  out.p2 = classify(expansion.p2);
  return out;
}

LeadingTerm TransitionLeadingTerm(const GameSpec& game,
                                  const PuiseuxExpansion& expansion, int from,
                                  int to) {
  LeadingTerm lead;
  bool found = false;
  for (int i = 0; i < game.num_actions1(); ++i) {
    const PuiseuxTerm& xi = expansion.p1[from][i];
    if (xi.coefficient == 0.0) continue;
    for (int j = 0; j < game.num_actions2(); ++j) {
      const PuiseuxTerm& yj = expansion.p2[from][j];
      const double q = game.Transition(from, i, j, to);
      if (yj.coefficient == 0.0 || q == 0.0) continue;
      const Exponent e = xi.exponent + yj.exponent;
      const double c = xi.coefficient * yj.coefficient * q;
      if (!found || e < lead.exponent) {
        lead = {c, e};
        found = true;
      } else if (e == lead.exponent) {
        lead.coefficient += c;
      }
    }
  }
  return lead;
}

double LimitStagePayoff(const GameSpec& game, const PuiseuxExpansion& expansion,
                        int k) {
  double mass = 0.0, payoff = 0.0;
  for (int i = 0; i < game.num_actions1(); ++i) {
    const PuiseuxTerm& xi = expansion.p1[k][i];
    if (Classify(xi) != ActionClass::kZero) continue;
    for (int j = 0; j < game.num_actions2(); ++j) {
      const PuiseuxTerm& yj = expansion.p2[k][j];
      if (Classify(yj) != ActionClass::kZero) continue;
      const double w = xi.coefficient * yj.coefficient;
      mass += w;
      payoff += w * game.Payoff(k, i, j);
    }
  }
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kNumericalFailure,
                "no exponent-0 action pair in state " + std::to_string(k));
  }
  return payoff / mass;
}

AbsorbingExitRates ExitRates(const GameSpec& game,
                             const PuiseuxExpansion& expansion, int live) {
  std::optional<int> found = IsAbsorbing(game);
  if (!found || *found != live) {
    throw Error(ErrorCode::kNotAbsorbing,
                "state " + std::to_string(live) +
                    " is not the unique live state of an absorbing game");
  }
  const int n = game.num_states();
  AbsorbingExitRates out;
  out.live = live;
  out.rates = out.a10 = out.a_star = out.a01 = Eigen::VectorXd::Zero(n);
  const ActionClassification classes = ClassifyActions(expansion);
  for (int i = 0; i < game.num_actions1(); ++i) {
    const PuiseuxTerm& xi = expansion.p1[live][i];
    if (xi.coefficient == 0.0) continue;
    for (int j = 0; j < game.num_actions2(); ++j) {
      const PuiseuxTerm& yj = expansion.p2[live][j];
      if (yj.coefficient == 0.0) continue;
      const Exponent e = xi.exponent + yj.exponent;
      for (int l = 0; l < n; ++l) {
        const double q = game.Transition(live, i, j, l);
        if (l == live || q == 0.0) continue;
        if (e < kExponentOne) {
          throw Error(ErrorCode::kUnstableExponent,
                      "exit pair (" + std::to_string(i) + "," +
                          std::to_string(j) + ") has order " + e.ToString() +
                          " below one");
        }
        if (e != kExponentOne) continue;
        const double rate = xi.coefficient * yj.coefficient * q;
        out.rates[l] += rate;
        const ActionClass ci = classes.p1[live][i], cj = classes.p2[live][j];
        if (ci == ActionClass::kOne && cj == ActionClass::kZero) {
          out.a10[l] += rate;
        } else if (ci == ActionClass::kZero && cj == ActionClass::kOne) {
          out.a01[l] += rate;
        } else {
          out.a_star[l] += rate;
        }
      }
    }
  }
  for (Eigen::VectorXd* row : {&out.rates, &out.a10, &out.a_star, &out.a01}) {
    (*row)[live] = 0.0;
    (*row)[live] = -row->sum();
  }
  out.limit_payoff = LimitStagePayoff(game, expansion, live);
  return out;
}

DeviationLimits DeviationDiagnostics(const AbsorbingExitRates& rates,
                                     const Eigen::VectorXd& values) {
  const int k = rates.live;
  double exit_value = 0.0, exit_value01 = 0.0;
  for (int l = 0; l < rates.rates.size(); ++l) {
    if (l == k) continue;
    exit_value += rates.rates[l] * values[l];
    exit_value01 += rates.a01[l] * values[l];
  }
  const double total = rates.TotalRate();
  const double total01 = -rates.a01[k];
  DeviationLimits out;
  out.player1_deviation = (rates.limit_payoff + exit_value01) / (1.0 + total01);
  if (total > 0.0) out.player2_deviation = exit_value / total;
  out.value_identity = (rates.limit_payoff + exit_value) / (1.0 + total);
  return out;
}

}  // namespace cpayoff
