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

#include "cpayoff/structure_checks.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cpayoff/error.h"

namespace cpayoff {
namespace {

// support[k][i][j][l] = q(l|k,i,j) > 0, decided on the exact data.
using Support = std::vector<std::vector<std::vector<std::vector<char>>>>;

Support BuildSupport(const GameSpec& game) {
  const int n = game.num_states();
  const int na = game.num_actions1(), nb = game.num_actions2();
  Support s(n, std::vector<std::vector<std::vector<char>>>(
                   na, std::vector<std::vector<char>>(nb, std::vector<char>(n))));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        for (int l = 0; l < n; ++l)
          s[k][i][j][l] = game.ExactTransition(k, i, j, l) > 0;
  return s;
}

HypothesisReport CheckHypothesis(const GameSpec& game, bool player1) {
  const Support q = BuildSupport(game);
  const int n = game.num_states();
  const int na = game.num_actions1(), nb = game.num_actions2();
  for (int l = 0; l < n; ++l) {
    for (int l2 = 0; l2 < n; ++l2) {
      if (l2 == l) continue;
      for (int l3 = 0; l3 < n; ++l3) {
        if (l3 == l || l3 == l2) continue;
        for (int i = 0; i < na; ++i) {
          for (int j = 0; j < nb; ++j) {
            if (!q[l][i][j][l2]) continue;
            // The branch differs from (i, j) only in the checked player.
            const int branches = player1 ? na : nb;
            for (int b = 0; b < branches; ++b) {
              const int ib = player1 ? b : i;
              const int jb = player1 ? j : b;
              if ((player1 ? ib == i : jb == j) || !q[l][ib][jb][l3]) continue;
              for (int i2 = 0; i2 < na; ++i2) {
                for (int j2 = 0; j2 < nb; ++j2) {
                  if (!q[l2][i2][j2][l]) continue;
                  HypothesisReport report;
                  report.holds = false;
                  report.witness = HypothesisWitness{l, l2, l3, i, ib,
                                                     j, jb, i2, j2};
                  return report;
                }
              }
            }
          }
        }
      }
    }
  }
  return {};
}

}  // namespace

std::string HypothesisWitness::ToString() const {
  std::ostringstream out;
  out << "states (" << l << "," << l2 << "," << l3 << ") actions i=" << i
      << " i_bar=" << i_bar << " j=" << j << " j_bar=" << j_bar
      << " i'=" << i2 << " j'=" << j2;
  return out.str();
}

HypothesisReport CheckH1(const GameSpec& game) {
  return CheckHypothesis(game, true);
}

HypothesisReport CheckH2(const GameSpec& game) {
  return CheckHypothesis(game, false);
}

std::optional<int> IsAbsorbing(const GameSpec& game) {
  const int n = game.num_states();
  std::optional<int> live;
  for (int k = 0; k < n; ++k) {
    bool absorbing = true;
    for (int i = 0; i < game.num_actions1() && absorbing; ++i)
      for (int j = 0; j < game.num_actions2() && absorbing; ++j)
        absorbing = game.ExactTransition(k, i, j, k) == 1;
    if (absorbing) continue;
    if (live) return std::nullopt;
    live = k;
  }
  return live;
}

bool IsGenerator(const Eigen::MatrixXd& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      if (r != c && a(r, c) < -tol) return false;
    }
    if (std::abs(a.row(r).sum()) > tol) return false;
  }
  return true;
}

std::optional<GeneratorMatrix> CriticalityCheck(
    const GameSpec& game, const PuiseuxExpansion& expansion) {
  const int n = game.num_states();
  GeneratorMatrix a = GeneratorMatrix::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    for (int l2 = 0; l2 < n; ++l2) {
      if (l2 == l) continue;
      const LeadingTerm lead = TransitionLeadingTerm(game, expansion, l, l2);
      if (lead.coefficient == 0.0) continue;
      if (lead.exponent < kExponentOne) return std::nullopt;
      if (lead.exponent == kExponentOne) a(l, l2) = lead.coefficient;
    }
    a(l, l) = -a.row(l).sum() + 0.0;  // + 0.0 clears a negative zero
  }
  return a;
}

std::vector<CriticalRegularization::Row> CriticalRegularization::BuildRows(
    const std::vector<std::vector<PuiseuxTerm>>& terms, double t_param) {
  std::vector<Row> rows(terms.size());
  for (size_t k = 0; k < terms.size(); ++k) {
    Row& row = rows[k];
    row.order_one.assign(terms[k].size(), 0.0);
    row.base.assign(terms[k].size(), 0.0);
    double mass0 = 0.0;
    for (size_t a = 0; a < terms[k].size(); ++a) {
      const PuiseuxTerm& term = terms[k][a];
      if (term.coefficient == 0.0) continue;
      if (term.exponent == kExponentZero) {
        row.base[a] = term.coefficient;
        mass0 += term.coefficient;
      } else if (term.exponent <= kExponentOne) {
        row.order_one[a] = term.coefficient *
                           std::pow(t_param, 1.0 - term.exponent.value());
      }
    }
    if (!(mass0 > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "state " + std::to_string(k) + " has no exponent-0 action");
    }
    for (double& w : row.base) w /= mass0;
  }
  return rows;
}

CriticalRegularization::CriticalRegularization(
    const PuiseuxExpansion& expansion, double t_param)
    : t_param_(t_param), lambda_cap_(1.0) {
  if (!(t_param >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "T must be at least 1");
  }
  p1_ = BuildRows(expansion.p1, t_param);
  p2_ = BuildRows(expansion.p2, t_param);
  for (const auto* rows : {&p1_, &p2_}) {
    for (const Row& row : *rows) {
      double s = 0.0;
      for (double w : row.order_one) s += w;
      if (s > 0.0) lambda_cap_ = std::min(lambda_cap_, 1.0 / s);
    }
  }
}

StationaryProfile CriticalRegularization::Profile(double lambda) const {
  if (!(lambda > 0.0) || lambda > lambda_cap_) {
    throw Error(ErrorCode::kMassOverflow,
                "lambda " + std::to_string(lambda) + " outside (0, " +
                    std::to_string(lambda_cap_) + "]");
  }
  auto fill = [lambda](const std::vector<Row>& rows) {
    std::vector<std::vector<double>> out(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
      const Row& row = rows[k];
      double perturbed = 0.0;
      for (double w : row.order_one) perturbed += w * lambda;
      const double rest = std::max(0.0, 1.0 - perturbed);
      out[k].resize(row.base.size());
      for (size_t a = 0; a < row.base.size(); ++a) {
        out[k][a] = row.order_one[a] * lambda + row.base[a] * rest;
      }
    }
    return out;
  };
  StationaryProfile profile;
  profile.x = fill(p1_);
  profile.y = fill(p2_);
  return profile;
}

PuiseuxExpansion CriticalRegularization::Expansion() const {
  auto terms = [](const std::vector<Row>& rows) {
    std::vector<std::vector<PuiseuxTerm>> out(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
      out[k].resize(rows[k].base.size());
      for (size_t a = 0; a < rows[k].base.size(); ++a) {
        PuiseuxTerm& t = out[k][a];
        if (rows[k].order_one[a] > 0.0) {
          t.coefficient = rows[k].order_one[a];
          t.exponent = kExponentOne;
        } else {
          t.coefficient = rows[k].base[a];
        }
      }
    }
    return out;
  };
  PuiseuxExpansion expansion;
  expansion.p1 = terms(p1_);
  expansion.p2 = terms(p2_);
  return expansion;
}

}  // namespace cpayoff
