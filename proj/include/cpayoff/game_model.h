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

#ifndef CPAYOFF_GAME_MODEL_H_
#define CPAYOFF_GAME_MODEL_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cpayoff/rational.h"

namespace cpayoff {

// Stage indices are 1-based throughout, matching the stage counter of play.
using Stage = std::int64_t;

template <typename T>
using Tensor3 = std::vector<std::vector<std::vector<T>>>;

// Unvalidated game description as produced by the file parser or by code.
struct GameData {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::string> actions1;
  std::vector<std::string> actions2;
  int initial = 0;
  Tensor3<Rational> payoff;                    // [k][i][j]
  Tensor3<std::vector<Rational>> transition;   // [k][i][j][l]
};

// A finite two-player zero-sum stochastic game with common action sets.
// Immutable; the exact rational data is kept next to a double mirror used by
// the numerical code.
class GameSpec {
 public:
  // Checks dimensions, index ranges and that each transition row is a
  // probability vector summing exactly to one. Errors name the offending
  // (k,i,j) cell.
  static GameSpec Validate(GameData raw);

  int num_states() const { return static_cast<int>(data_.states.size()); }
  int num_actions1() const { return static_cast<int>(data_.actions1.size()); }
  int num_actions2() const { return static_cast<int>(data_.actions2.size()); }
  int initial_state() const { return data_.initial; }
  const std::string& name() const { return data_.name; }
  const std::vector<std::string>& state_names() const { return data_.states; }
  const GameData& data() const { return data_; }

  double Payoff(int k, int i, int j) const {
    return payoff_[(k * num_actions1() + i) * num_actions2() + j];
  }
  double Transition(int k, int i, int j, int l) const {
    return transition_[((k * num_actions1() + i) * num_actions2() + j) *
                           num_states() + l];
  }
  const Rational& ExactPayoff(int k, int i, int j) const {
    return data_.payoff[k][i][j];
  }
  const Rational& ExactTransition(int k, int i, int j, int l) const {
    return data_.transition[k][i][j][l];
  }

  double MaxAbsPayoff() const { return max_abs_payoff_; }

  // Same game started from state `k`.
  GameSpec WithInitialState(int k) const;

  friend bool operator==(const GameSpec& a, const GameSpec& b);

 private:
  explicit GameSpec(GameData data);

  GameData data_;
  std::vector<double> payoff_;
  std::vector<double> transition_;
  double max_abs_payoff_ = 0.0;
};

// Normalized nonnegative stage weights theta_1, theta_2, ...
class Evaluation {
 public:
  enum class Kind { kDiscounted, kUniform, kExplicit, kPower };

  // Geometric weights lambda (1-lambda)^(m-1), lambda in (0,1].
  static Evaluation Discounted(double lambda);
  // 1/T on the first T stages.
  static Evaluation Uniform(Stage horizon);
  // Arbitrary finite nonnegative weights, normalized here.
  static Evaluation Explicit(std::vector<double> weights);
  // Exact normalization; the double weights are rounded from the exact ones.
  static Evaluation ExplicitExact(std::vector<Rational> weights);
  // theta_m proportional to (T-m+1)^(alpha-1) on the first T stages.
  static Evaluation Power(double alpha, Stage horizon);
  // Power family with the smallest horizon whose largest weight is <= norm.
  static Evaluation PowerWithNorm(double alpha, double norm);
  // "discounted:<l>", "uniform:<T>", "power:<a>,<T>" or "file:<path>" (one
  // weight per line or whitespace separated).
  static Evaluation Parse(std::string_view descriptor);

  Kind kind() const { return kind_; }
  std::string Descriptor() const;

  double Weight(Stage m) const;
  // Sum of weights from stage m on.
  double SuffixSum(Stage m) const;
  // Sum of weights of stages 1..m.
  double PartialSum(Stage m) const;
  double NormInf() const;
  // Last stage any loop needs to visit: the support length of finite
  // evaluations, otherwise the first stage after which the tail mass is
  // at most kTailMass.
  Stage Horizon() const;

  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  // Null unless built by ExplicitExact.
  const std::vector<Rational>* exact_weights() const {
    return exact_weights_.get();
  }

  static constexpr double kTailMass = 1e-9;

 private:
  Evaluation() = default;
  double PowerSum(Stage n) const;

  Kind kind_ = Kind::kUniform;
  double lambda_ = 0.0;
  double log_keep_ = 0.0;  // log(1 - lambda)
  Stage horizon_ = 1;
  double alpha_ = 1.0;
  double power_norm_ = 1.0;    // sum_{j<=T} j^(alpha-1)
  double power_offset_ = 0.0;  // constant of the asymptotic power sum
  std::shared_ptr<const std::vector<double>> table_;
  std::shared_ptr<const std::vector<double>> suffix_;
  std::shared_ptr<const std::vector<Rational>> exact_weights_;
};

// Least M >= 1 with theta_1 + ... + theta_M >= t, capped at Horizon().
Stage Clock(const Evaluation& eval, double t);

// theta_m / sum_{m' >= m} theta_m'.
double EffectiveDiscount(const Evaluation& eval, Stage m);

inline double NormInf(const Evaluation& eval) { return eval.NormInf(); }

template <typename T>
struct BasicProfile {
  std::vector<std::vector<T>> x;  // [state][action of player 1]
  std::vector<std::vector<T>> y;  // [state][action of player 2]
};

using StationaryProfile = BasicProfile<double>;
using ExactProfile = BasicProfile<Rational>;

// Throws kDimensionMismatch or kInvalidArgument unless every row is a
// probability vector of the right size (sum within 1e-12).
void ValidateProfile(const GameSpec& game, const StationaryProfile& profile);
void ValidateProfile(const GameSpec& game, const ExactProfile& profile);

// Pure profile playing the given action indices in every state.
StationaryProfile PureProfile(const GameSpec& game, const std::vector<int>& p1,
                              const std::vector<int>& p2);

struct StageData {
  Eigen::MatrixXd kernel;  // state-to-state transition matrix
  Eigen::VectorXd payoff;  // expected stage payoff per state
};

struct ExactStageData {
  std::vector<std::vector<Rational>> kernel;
  std::vector<Rational> payoff;
};

StageData InducedStageData(const GameSpec& game,
                           const StationaryProfile& profile);
ExactStageData InducedStageDataExact(const GameSpec& game,
                                     const ExactProfile& profile);

// Allocation-free variant for inner loops; `kernel` and `payoff` must already
// have the right sizes.
void InducedStageDataInto(const GameSpec& game,
                          const StationaryProfile& profile,
                          Eigen::MatrixXd& kernel, Eigen::VectorXd& payoff);

}  // namespace cpayoff

#endif  // CPAYOFF_GAME_MODEL_H_
