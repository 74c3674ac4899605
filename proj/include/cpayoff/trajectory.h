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

#ifndef CPAYOFF_TRAJECTORY_H_
#define CPAYOFF_TRAJECTORY_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cpayoff/game_model.h"
#include "cpayoff/puiseux.h"
#include "cpayoff/structure_checks.h"

namespace cpayoff {

enum class KernelMode { kLeadingTerm, kLp };

std::string KernelModeName(KernelMode mode);
KernelMode ParseKernelMode(const std::string& name);

// Stationary profile as a function of the discount; played at stage m with
// the effective discount of the evaluation.
class StrategyFamily {
 public:
  // Leading terms c lambda^e, clipped to [0,1] and renormalized.
  static StrategyFamily LeadingTerm(const GameSpec& game,
                                    const PuiseuxExpansion& expansion);
  // Optimal discounted profile, solved once per distinct discount.
  static StrategyFamily Lp(const GameSpec& game);
  // x_lambda^T, y_lambda^T with the discount clipped to the family's cap.
  static StrategyFamily Regularized(const GameSpec& game,
                                    const CriticalRegularization& family);

  const GameSpec& game() const { return *game_; }
  KernelMode mode() const { return mode_; }

  // `out` keeps its allocation across calls.
  void ProfileInto(double lambda, StationaryProfile& out) const {
    profile_(lambda, out);
  }
  StationaryProfile Profile(double lambda) const;

 private:
  using ProfileFn = std::function<void(double, StationaryProfile&)>;
  StrategyFamily(const GameSpec& game, KernelMode mode, ProfileFn fn);

  std::shared_ptr<const GameSpec> game_;
  KernelMode mode_;
  ProfileFn profile_;
};

// Q_m and g_m induced at stage m.
StageData StageKernel(const StrategyFamily& family, const Evaluation& eval,
                      Stage m);

// Product Q_m0 Q_{m0+1} ... Q_{m1-1}; the identity when m1 <= m0.
Eigen::MatrixXd WindowKernel(const StrategyFamily& family,
                             const Evaluation& eval, Stage m0, Stage m1);

// Largest entrywise kernel difference between leading-term and LP families at
// `count` stages spread evenly over [1, Clock(eval, 1)].
double SpotCheckKernels(const StrategyFamily& leading, const StrategyFamily& lp,
                        const Evaluation& eval, int count = 10);

struct TrajectoryCurve {
  std::vector<double> grid;
  std::vector<Stage> stages;  // clock index per grid point; 0 for limits
  std::vector<double> gamma;
  // Distribution at the clock stage, before its transition.
  std::vector<Eigen::VectorXd> marginal;
  // Sum of theta_m times the stage-m distribution up to the clock stage.
  std::vector<Eigen::VectorXd> occupation;

  int num_states() const {
    return marginal.empty() ? 0 : static_cast<int>(marginal.front().size());
  }
};

// `points` equally spaced times on [0,1]; throws unless points >= 2.
std::vector<double> UniformGrid(int points);

// Exact forward propagation from `initial` (default: the game's initial
// state) up to Clock(eval, max grid time).
TrajectoryCurve PropagateExact(const StrategyFamily& family,
                               const Evaluation& eval,
                               const std::vector<double>& grid,
                               int initial = -1);

struct SimulationBatch {
  int n_runs = 0;
  uint64_t seed = 0;
  std::vector<double> grid;
  std::vector<Stage> stages;
  int num_states = 0;
  // states[run * grid.size() + g]: state at the clock stage of grid[g].
  std::vector<uint16_t> states;
  // jumps[run * (grid.size() - 1) + g]: state changes between the clock
  // stages of grid[g] and grid[g + 1] (saturating).
  std::vector<uint16_t> jumps;

  int state(int run, size_t g) const {
    return states[static_cast<size_t>(run) * grid.size() + g];
  }
  int jump_count(int run, size_t g) const {
    return jumps[static_cast<size_t>(run) * (grid.size() - 1) + g];
  }
  // Fraction of runs in each state at grid[g].
  Eigen::VectorXd Frequencies(size_t g) const;
  // Fraction of runs with at least `count` jumps between grid[g0] and
  // grid[g1].
  double FractionWithJumps(size_t g0, size_t g1, int count) const;
  // Index of grid time t (within 1e-12); throws kWindowOutOfRange.
  size_t GridIndex(double t) const;
};

// Samples n_runs independent plays. Run r draws from its own generator seeded
// with seed ^ r, so results do not depend on how runs are scheduled. Jump
// stages are sampled exactly from per-state cumulative hazards.
SimulationBatch Simulate(const StrategyFamily& family, const Evaluation& eval,
                         int n_runs, uint64_t seed,
                         const std::vector<double>& grid, int initial = -1);

// (P_{t,t+h} - Id) / h with P the exact product of the stage kernels from
// Clock(t) to Clock(t+h). Throws kWindowOutOfRange unless
// 0 <= t < t+h < 1 and kDegenerateWindow when both clocks agree.
Eigen::MatrixXd EmpiricalGenerator(const StrategyFamily& family,
                                   const Evaluation& eval, double t, double h);
// Same estimate from simulated paths; t and t+h must be grid times.
Eigen::MatrixXd EmpiricalGenerator(const SimulationBatch& batch, double t,
                                   double h);

// CSV with a `# key: value` line per metadata entry and the header
// t,gamma,marginal_<state>...,occupation_<state>...
std::string CurveToCsv(
    const TrajectoryCurve& curve, const std::vector<std::string>& state_names,
    const std::vector<std::pair<std::string, std::string>>& metadata);

}  // namespace cpayoff

#endif  // CPAYOFF_TRAJECTORY_H_
