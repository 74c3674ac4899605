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

#include "cpayoff/game_model.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cpayoff/error.h"

namespace cpayoff {
namespace {

constexpr Stage kPowerTableSize = 4096;

std::string CellName(int k, int i, int j) {
  return "(" + std::to_string(k) + "," + std::to_string(i) + "," +
         std::to_string(j) + ")";
}

// Asymptotic part of sum_{j<=n} j^s, without the constant term.
double PowerSumTail(double s, double n) {
  const double a = std::pow(n, s);
  return a * n / (s + 1.0) + a / 2.0 + s * a / n / 12.0 -
         s * (s - 1) * (s - 2) * a / (n * n * n) / 720.0 +
         s * (s - 1) * (s - 2) * (s - 3) * (s - 4) * a / std::pow(n, 5) /
             30240.0;
}

double ParseDouble(std::string_view text, std::string_view context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError, "bad number '" + std::string(text) +
                                            "' in '" + std::string(context) + "'");
  }
  return value;
}

Stage ParseStage(std::string_view text, std::string_view context) {
  double value = ParseDouble(text, context);
  if (value < 1 || value != std::floor(value) || value > 1e15) {
    throw Error(ErrorCode::kParseError,
                "expected a positive integer in '" + std::string(context) + "'");
  }
  return static_cast<Stage>(value);
}

template <typename T>
void ValidateRows(const std::vector<std::vector<T>>& rows, int n_states,
                  int n_actions, const char* player) {
  if (static_cast<int>(rows.size()) != n_states) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(player) + " profile has wrong number of states");
  }
  for (int k = 0; k < n_states; ++k) {
    if (static_cast<int>(rows[k].size()) != n_actions) {
      throw Error(ErrorCode::kDimensionMismatch,
                  std::string(player) + " profile has wrong number of actions "
                  "in state " + std::to_string(k));
    }
    T total = 0;
    for (const T& p : rows[k]) {
      if (p < 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(player) + " profile has a negative entry in "
                    "state " + std::to_string(k));
      }
      total += p;
    }
    bool ok;
    if constexpr (std::is_same_v<T, double>) {
      ok = std::abs(total - 1.0) <= 1e-12;
    } else {
      ok = total == 1;
    }
    if (!ok) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(player) + " profile row of state " +
                      std::to_string(k) + " does not sum to one");
    }
  }
}

}  // namespace

GameSpec::GameSpec(GameData data) : data_(std::move(data)) {
  const int n = num_states(), ni = num_actions1(), nj = num_actions2();
  payoff_.resize(static_cast<size_t>(n) * ni * nj);
  transition_.resize(static_cast<size_t>(n) * ni * nj * n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < ni; ++i) {
      for (int j = 0; j < nj; ++j) {
        const double g = ToDouble(data_.payoff[k][i][j]);
        payoff_[(k * ni + i) * nj + j] = g;
        max_abs_payoff_ = std::max(max_abs_payoff_, std::abs(g));
        for (int l = 0; l < n; ++l) {
          transition_[((k * ni + i) * nj + j) * n + l] =
              ToDouble(data_.transition[k][i][j][l]);
        }
      }
    }
  }
}

GameSpec GameSpec::Validate(GameData raw) {
  const int n = static_cast<int>(raw.states.size());
  const int ni = static_cast<int>(raw.actions1.size());
  const int nj = static_cast<int>(raw.actions2.size());
  if (n == 0 || ni == 0 || nj == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "game needs at least one state and one action per player");
  }
  if (raw.initial < 0 || raw.initial >= n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "initial state index " + std::to_string(raw.initial));
  }
  if (static_cast<int>(raw.payoff.size()) != n ||
      static_cast<int>(raw.transition.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "payoff and transition need one entry per state");
  }
  for (int k = 0; k < n; ++k) {
    if (static_cast<int>(raw.payoff[k].size()) != ni ||
        static_cast<int>(raw.transition[k].size()) != ni) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "state " + std::to_string(k) + " has " +
                      std::to_string(raw.payoff[k].size()) +
                      " player-1 actions; per-state action sets are not "
                      "supported, every state must use all " +
                      std::to_string(ni));
    }
    for (int i = 0; i < ni; ++i) {
      if (static_cast<int>(raw.payoff[k][i].size()) != nj ||
          static_cast<int>(raw.transition[k][i].size()) != nj) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "state " + std::to_string(k) + " row " + std::to_string(i) +
                        ": per-state action sets are not supported, every "
                        "state must use all " + std::to_string(nj) +
                        " player-2 actions");
      }
      for (int j = 0; j < nj; ++j) {
        const auto& row = raw.transition[k][i][j];
        if (static_cast<int>(row.size()) != n) {
          throw Error(ErrorCode::kIndexOutOfRange,
                      "transition " + CellName(k, i, j) +
                          " does not have one entry per state");
        }
        Rational total = 0;
        for (int l = 0; l < n; ++l) {
          if (row[l] < 0) {
            throw Error(ErrorCode::kNegativeProbability,
                        "transition " + CellName(k, i, j) + " to state " +
                            std::to_string(l) + " is " + FormatRational(row[l]));
          }
          total += row[l];
        }
        if (total != 1) {
          throw Error(ErrorCode::kRowSumNotOne,
                      "transition " + CellName(k, i, j) + " sums to " +
                          FormatRational(total));
        }
      }
    }
  }
  return GameSpec(std::move(raw));
}

GameSpec GameSpec::WithInitialState(int k) const {
  if (k < 0 || k >= num_states()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "initial state index " + std::to_string(k));
  }
  GameSpec copy = *this;
  copy.data_.initial = k;
  return copy;
}

bool operator==(const GameSpec& a, const GameSpec& b) {
  const GameData& x = a.data_;
  const GameData& y = b.data_;
  return x.name == y.name && x.states == y.states && x.actions1 == y.actions1 &&
         x.actions2 == y.actions2 && x.initial == y.initial &&
         x.payoff == y.payoff && x.transition == y.transition;
}

Evaluation Evaluation::Discounted(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "discount must lie in (0,1]");
  }
  Evaluation e;
  e.kind_ = Kind::kDiscounted;
  e.lambda_ = lambda;
  if (lambda == 1.0) {
    e.log_keep_ = -INFINITY;
    e.horizon_ = 1;
  } else {
    e.log_keep_ = std::log1p(-lambda);
    e.horizon_ = std::max<Stage>(
        1, static_cast<Stage>(std::ceil(std::log(kTailMass) / e.log_keep_)));
  }
  return e;
}

Evaluation Evaluation::Uniform(Stage horizon) {
  if (horizon < 1) {
    throw Error(ErrorCode::kInvalidArgument, "uniform horizon must be >= 1");
  }
  Evaluation e;
  e.kind_ = Kind::kUniform;
  e.horizon_ = horizon;
  return e;
}

Evaluation Evaluation::Explicit(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "explicit weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "explicit weights sum to zero");
  }
  while (!weights.empty() && weights.back() == 0.0) weights.pop_back();
  for (double& w : weights) w /= total;
  auto suffix = std::make_shared<std::vector<double>>(weights.size() + 1, 0.0);
  for (size_t m = weights.size(); m-- > 0;) {
    (*suffix)[m] = (*suffix)[m + 1] + weights[m];
  }
  Evaluation e;
  e.kind_ = Kind::kExplicit;
  e.horizon_ = static_cast<Stage>(weights.size());
  e.table_ = std::make_shared<const std::vector<double>>(std::move(weights));
  e.suffix_ = std::move(suffix);
  return e;
}

Evaluation Evaluation::ExplicitExact(std::vector<Rational> weights) {
  Rational total = 0;
  for (const Rational& w : weights) {
    if (w < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "explicit weights must be nonnegative");
    }
    total += w;
  }
  if (total == 0) {
    throw Error(ErrorCode::kInvalidArgument, "explicit weights sum to zero");
  }
  while (!weights.empty() && weights.back() == 0) weights.pop_back();
  for (Rational& w : weights) w /= total;
  std::vector<double> rounded;
  rounded.reserve(weights.size());
  for (const Rational& w : weights) rounded.push_back(ToDouble(w));
  // Suffix sums from the exact weights so that SuffixSum is correctly rounded.
  auto suffix = std::make_shared<std::vector<double>>(weights.size() + 1, 0.0);
  Rational tail = 0;
  for (size_t m = weights.size(); m-- > 0;) {
    tail += weights[m];
    (*suffix)[m] = ToDouble(tail);
  }
  Evaluation e;
  e.kind_ = Kind::kExplicit;
  e.horizon_ = static_cast<Stage>(weights.size());
  e.table_ = std::make_shared<const std::vector<double>>(std::move(rounded));
  e.suffix_ = std::move(suffix);
  e.exact_weights_ =
      std::make_shared<const std::vector<Rational>>(std::move(weights));
  return e;
}

Evaluation Evaluation::Power(double alpha, Stage horizon) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument, "power exponent must be > 0");
  }
  if (horizon < 1) {
    throw Error(ErrorCode::kInvalidArgument, "power horizon must be >= 1");
  }
  Evaluation e;
  e.kind_ = Kind::kPower;
  e.alpha_ = alpha;
  e.horizon_ = horizon;
  const double s = alpha - 1.0;
  const Stage size = std::min(horizon, kPowerTableSize);
  auto table = std::make_shared<std::vector<double>>(size + 1, 0.0);
  for (Stage j = 1; j <= size; ++j) {
    (*table)[j] = (*table)[j - 1] + std::pow(static_cast<double>(j), s);
  }
  if (size == kPowerTableSize) {
    e.power_offset_ =
        (*table)[size] - PowerSumTail(s, static_cast<double>(size));
  }
  e.table_ = std::move(table);
  e.power_norm_ = e.PowerSum(horizon);
  return e;
}

Evaluation Evaluation::PowerWithNorm(double alpha, double norm) {
  if (!(norm > 0.0 && norm <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target norm must lie in (0,1]");
  }
  Stage lo = 1, hi = 1;
  while (Power(alpha, hi).NormInf() > norm) {
    lo = hi;
    hi *= 2;
    if (hi > (Stage{1} << 40)) {
      throw Error(ErrorCode::kInvalidArgument, "target norm too small");
    }
  }
  if (hi == 1) return Power(alpha, 1);
  // Invariant: norm(lo) > target >= norm(hi).
  while (hi - lo > 1) {
    Stage mid = lo + (hi - lo) / 2;
    if (Power(alpha, mid).NormInf() > norm) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Power(alpha, hi);
}

Evaluation Evaluation::Parse(std::string_view descriptor) {
  auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kParseError,
                "evaluation '" + std::string(descriptor) +
                    "' must look like kind:parameters");
  }
  std::string_view kind = descriptor.substr(0, colon);
  std::string_view args = descriptor.substr(colon + 1);
  if (kind == "discounted") {
    return Discounted(ParseDouble(args, descriptor));
  }
  if (kind == "uniform") {
    return Uniform(ParseStage(args, descriptor));
  }
  if (kind == "power") {
    auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "power evaluation needs alpha,T");
    }
    return Power(ParseDouble(args.substr(0, comma), descriptor),
                 ParseStage(args.substr(comma + 1), descriptor));
  }
  if (kind == "file") {
    std::ifstream in{std::string(args)};
    if (!in) {
      throw Error(ErrorCode::kParseError,
                  "cannot open weight file '" + std::string(args) + "'");
    }
    std::vector<Rational> weights;
    std::string token;
    while (in >> token) weights.push_back(ParseRational(token));
    return ExplicitExact(std::move(weights));
  }
  throw Error(ErrorCode::kParseError,
              "unknown evaluation kind '" + std::string(kind) + "'");
}

std::string Evaluation::Descriptor() const {
  char buffer[96];
  switch (kind_) {
    case Kind::kDiscounted:
      std::snprintf(buffer, sizeof(buffer), "discounted:%.17g", lambda_);
      break;
    case Kind::kUniform:
      std::snprintf(buffer, sizeof(buffer), "uniform:%lld",
                    static_cast<long long>(horizon_));
      break;
    case Kind::kPower:
      std::snprintf(buffer, sizeof(buffer), "power:%.17g,%lld", alpha_,
                    static_cast<long long>(horizon_));
      break;
    case Kind::kExplicit:
      std::snprintf(buffer, sizeof(buffer), "explicit:%lld",
                    static_cast<long long>(horizon_));
      break;
  }
  return buffer;
}

double Evaluation::PowerSum(Stage n) const {
  if (n <= 0) return 0.0;
  if (n < static_cast<Stage>(table_->size())) return (*table_)[n];
  return power_offset_ + PowerSumTail(alpha_ - 1.0, static_cast<double>(n));
}

double Evaluation::Weight(Stage m) const {
  if (m < 1) return 0.0;
  switch (kind_) {
    case Kind::kDiscounted:
      if (lambda_ == 1.0) return m == 1 ? 1.0 : 0.0;
      return lambda_ * std::exp(static_cast<double>(m - 1) * log_keep_);
    case Kind::kUniform:
      return m <= horizon_ ? 1.0 / static_cast<double>(horizon_) : 0.0;
    case Kind::kPower:
      if (m > horizon_) return 0.0;
      return std::pow(static_cast<double>(horizon_ - m + 1), alpha_ - 1.0) /
             power_norm_;
    case Kind::kExplicit:
      return m <= horizon_ ? (*table_)[m - 1] : 0.0;
  }
  return 0.0;
}

double Evaluation::SuffixSum(Stage m) const {
  if (m < 1) m = 1;
  switch (kind_) {
    case Kind::kDiscounted:
      if (lambda_ == 1.0) return m == 1 ? 1.0 : 0.0;
      return std::exp(static_cast<double>(m - 1) * log_keep_);
    case Kind::kUniform:
      return m <= horizon_ ? static_cast<double>(horizon_ - m + 1) /
                                 static_cast<double>(horizon_)
                           : 0.0;
    case Kind::kPower:
      return m <= horizon_ ? PowerSum(horizon_ - m + 1) / power_norm_ : 0.0;
    case Kind::kExplicit:
      return m <= horizon_ ? (*suffix_)[m - 1] : 0.0;
  }
  return 0.0;
}

double Evaluation::PartialSum(Stage m) const {
  if (m < 1) return 0.0;
  switch (kind_) {
    case Kind::kDiscounted:
      if (lambda_ == 1.0) return 1.0;
      return -std::expm1(static_cast<double>(m) * log_keep_);
    case Kind::kUniform:
      return m >= horizon_ ? 1.0
                           : static_cast<double>(m) /
                                 static_cast<double>(horizon_);
    case Kind::kPower:
      if (m >= horizon_) return 1.0;
      return (power_norm_ - PowerSum(horizon_ - m)) / power_norm_;
    case Kind::kExplicit:
      return m >= horizon_ ? 1.0 : 1.0 - (*suffix_)[m];
  }
  return 0.0;
}

double Evaluation::NormInf() const {
  switch (kind_) {
    case Kind::kDiscounted:
      return lambda_;
    case Kind::kUniform:
      return 1.0 / static_cast<double>(horizon_);
    case Kind::kPower:
      // Weights increase towards the last stage when alpha < 1.
      return alpha_ < 1.0 ? Weight(horizon_) : Weight(1);
    case Kind::kExplicit:
      return *std::max_element(table_->begin(), table_->end());
  }
  return 0.0;
}

Stage Evaluation::Horizon() const { return horizon_; }

Stage Clock(const Evaluation& eval, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kTOutOfRange, "clock time must lie in [0,1]");
  }
  if (t == 0.0) return 1;
  Stage lo = 1, hi = eval.Horizon();
  if (eval.PartialSum(hi) < t) return hi;
  while (lo < hi) {
    Stage mid = lo + (hi - lo) / 2;
    if (eval.PartialSum(mid) >= t) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

double EffectiveDiscount(const Evaluation& eval, Stage m) {
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "stages start at 1");
  switch (eval.kind()) {
    case Evaluation::Kind::kDiscounted:
      return eval.lambda();
    case Evaluation::Kind::kUniform:
      if (m > eval.Horizon()) break;
      return 1.0 / static_cast<double>(eval.Horizon() - m + 1);
    case Evaluation::Kind::kPower: {
      if (m > eval.Horizon()) break;
      // The normalizer cancels; both factors are evaluated unnormalized.
      const double suffix = eval.SuffixSum(m);
      return std::min(1.0, eval.Weight(m) / suffix);
    }
    case Evaluation::Kind::kExplicit: {
      const double suffix = eval.SuffixSum(m);
      if (suffix <= 0.0) break;
      return std::min(1.0, eval.Weight(m) / suffix);
    }
  }
  throw Error(ErrorCode::kExhaustedEvaluation,
              "no weight left from stage " + std::to_string(m));
}

void ValidateProfile(const GameSpec& game, const StationaryProfile& profile) {
  ValidateRows(profile.x, game.num_states(), game.num_actions1(), "player-1");
  ValidateRows(profile.y, game.num_states(), game.num_actions2(), "player-2");
}

void ValidateProfile(const GameSpec& game, const ExactProfile& profile) {
  ValidateRows(profile.x, game.num_states(), game.num_actions1(), "player-1");
  ValidateRows(profile.y, game.num_states(), game.num_actions2(), "player-2");
}

StationaryProfile PureProfile(const GameSpec& game, const std::vector<int>& p1,
                              const std::vector<int>& p2) {
  const int n = game.num_states();
  if (static_cast<int>(p1.size()) != n || static_cast<int>(p2.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "one action per state needed");
  }
  StationaryProfile profile;
  profile.x.assign(n, std::vector<double>(game.num_actions1(), 0.0));
  profile.y.assign(n, std::vector<double>(game.num_actions2(), 0.0));
  for (int k = 0; k < n; ++k) {
    if (p1[k] < 0 || p1[k] >= game.num_actions1() || p2[k] < 0 ||
        p2[k] >= game.num_actions2()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "pure action out of range in state " + std::to_string(k));
    }
    profile.x[k][p1[k]] = 1.0;
    profile.y[k][p2[k]] = 1.0;
  }
  return profile;
}

void InducedStageDataInto(const GameSpec& game,
                          const StationaryProfile& profile,
                          Eigen::MatrixXd& kernel, Eigen::VectorXd& payoff) {
  const int n = game.num_states();
  kernel.setZero();
  payoff.setZero();
  for (int k = 0; k < n; ++k) {
    const auto& x = profile.x[k];
    const auto& y = profile.y[k];
    for (int i = 0; i < game.num_actions1(); ++i) {
      if (x[i] == 0.0) continue;
      for (int j = 0; j < game.num_actions2(); ++j) {
        const double w = x[i] * y[j];
        if (w == 0.0) continue;
        payoff[k] += w * game.Payoff(k, i, j);
        for (int l = 0; l < n; ++l) kernel(k, l) += w * game.Transition(k, i, j, l);
      }
    }
  }
}

StageData InducedStageData(const GameSpec& game,
                           const StationaryProfile& profile) {
  ValidateProfile(game, profile);
  const int n = game.num_states();
  StageData data{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  InducedStageDataInto(game, profile, data.kernel, data.payoff);
  return data;
}

ExactStageData InducedStageDataExact(const GameSpec& game,
                                     const ExactProfile& profile) {
  ValidateProfile(game, profile);
  const int n = game.num_states();
  ExactStageData data;
  data.kernel.assign(n, std::vector<Rational>(n, Rational(0)));
  data.payoff.assign(n, Rational(0));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < game.num_actions1(); ++i) {
      for (int j = 0; j < game.num_actions2(); ++j) {
        const Rational w = profile.x[k][i] * profile.y[k][j];
        if (w == 0) continue;
        data.payoff[k] += w * game.ExactPayoff(k, i, j);
        for (int l = 0; l < n; ++l) {
          data.kernel[k][l] += w * game.ExactTransition(k, i, j, l);
        }
      }
    }
  }
  return data;
}

}  // namespace cpayoff
