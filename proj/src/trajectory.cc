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

#include "cpayoff/trajectory.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "cpayoff/discounted_solver.h"
#include "cpayoff/error.h"

namespace cpayoff {
namespace {

constexpr int kSimulationBlock = 4096;

// splitmix64; one 64-bit word of state per run.
struct RunRng {
  uint64_t state;

  uint64_t Next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }
  double Exponential() { return -std::log1p(-Uniform()); }
};

void CheckGrid(const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty grid");
  for (size_t g = 0; g < grid.size(); ++g) {
    if (!(grid[g] >= 0.0 && grid[g] <= 1.0)) {
      throw Error(ErrorCode::kTOutOfRange, "grid time outside [0,1]");
    }
    if (g > 0 && grid[g] < grid[g - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "grid must be sorted");
    }
  }
}

int ResolveInitial(const GameSpec& game, int initial) {
  if (initial < 0) return game.initial_state();
  if (initial >= game.num_states()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "initial state " + std::to_string(initial));
  }
  return initial;
}

void EnsureProfileShape(const GameSpec& game, StationaryProfile& out) {
  const size_t n = game.num_states();
  out.x.resize(n);
  out.y.resize(n);
  for (size_t k = 0; k < n; ++k) {
    out.x[k].resize(game.num_actions1());
    out.y[k].resize(game.num_actions2());
  }
}

struct LeadingRows {
  // [state][action] -> (coefficient, exponent)
  std::vector<std::vector<std::pair<double, double>>> p1, p2;
};

void EvaluateRows(const std::vector<std::vector<std::pair<double, double>>>& rows,
                  double lambda, std::vector<std::vector<double>>& out) {
  for (size_t k = 0; k < rows.size(); ++k) {
    double total = 0.0;
    for (size_t a = 0; a < rows[k].size(); ++a) {
      const auto [c, e] = rows[k][a];
      double p = 0.0;
      if (c > 0.0) {
        p = e == 0.0 ? c : e == 1.0 ? c * lambda : c * std::pow(lambda, e);
      }
      p = std::min(p, 1.0);
      out[k][a] = p;
      total += p;
    }
    if (!(total > 0.0)) {
      throw Error(ErrorCode::kNumericalFailure,
                  "leading terms vanish in state " + std::to_string(k));
    }
    for (double& p : out[k]) p /= total;
  }
}

}  // namespace

std::string KernelModeName(KernelMode mode) {
  return mode == KernelMode::kLp ? "lp" : "leading";
}

KernelMode ParseKernelMode(const std::string& name) {
  if (name == "leading") return KernelMode::kLeadingTerm;
  if (name == "lp") return KernelMode::kLp;
  throw Error(ErrorCode::kInvalidArgument,
              "mode must be leading or lp, got " + name);
}

StrategyFamily::StrategyFamily(const GameSpec& game, KernelMode mode,
                               ProfileFn fn)
    : game_(std::make_shared<GameSpec>(game)),
      mode_(mode),
      profile_(std::move(fn)) {}

StrategyFamily StrategyFamily::LeadingTerm(const GameSpec& game,
                                           const PuiseuxExpansion& expansion) {
  if (expansion.num_states() != game.num_states()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expansion does not match the game");
  }
  auto rows = std::make_shared<LeadingRows>();
  auto convert = [](const std::vector<std::vector<PuiseuxTerm>>& terms) {
    std::vector<std::vector<std::pair<double, double>>> out(terms.size());
    for (size_t k = 0; k < terms.size(); ++k) {
      for (const auto& t : terms[k]) {
        out[k].emplace_back(t.coefficient, t.exponent.value());
      }
    }
    return out;
  };
  rows->p1 = convert(expansion.p1);
  rows->p2 = convert(expansion.p2);
  const GameSpec copy = game;
  return StrategyFamily(
      game, KernelMode::kLeadingTerm,
      [rows, copy](double lambda, StationaryProfile& out) {
        EnsureProfileShape(copy, out);
        EvaluateRows(rows->p1, lambda, out.x);
        EvaluateRows(rows->p2, lambda, out.y);
      });
}

StrategyFamily StrategyFamily::Lp(const GameSpec& game) {
  struct Cache {
    GameSpec game;
    std::map<double, StationaryProfile> profiles;
    BasisHints last;
  };
  auto cache = std::make_shared<Cache>(Cache{game, {}, {}});
  return StrategyFamily(
      game, KernelMode::kLp, [cache](double lambda, StationaryProfile& out) {
        auto it = cache->profiles.find(lambda);
        if (it == cache->profiles.end()) {
          if (cache->profiles.size() >= (1u << 14)) cache->profiles.clear();
          DiscountedOptions options;
          if (!cache->last.empty()) options.warm_start = &cache->last;
          DiscountedSolution s = SolveDiscounted(cache->game, lambda, options);
          cache->last = s.bases;
          it = cache->profiles.emplace(lambda, std::move(s.profile)).first;
        }
        out = it->second;
      });
}

StrategyFamily StrategyFamily::Regularized(
    const GameSpec& game, const CriticalRegularization& family) {
  if (static_cast<int>(family.Expansion().p1.size()) != game.num_states()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "regularization does not match the game");
  }
  return StrategyFamily(
      game, KernelMode::kLeadingTerm,
      [family](double lambda, StationaryProfile& out) {
        out = family.Profile(std::min(lambda, family.lambda_cap()));
      });
}

StationaryProfile StrategyFamily::Profile(double lambda) const {
  StationaryProfile out;
  profile_(lambda, out);
  return out;
}

StageData StageKernel(const StrategyFamily& family, const Evaluation& eval,
                      Stage m) {
  return InducedStageData(family.game(),
                          family.Profile(EffectiveDiscount(eval, m)));
}

Eigen::MatrixXd WindowKernel(const StrategyFamily& family,
                             const Evaluation& eval, Stage m0, Stage m1) {
  const int n = family.game().num_states();
  Eigen::MatrixXd product = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd kernel(n, n), next(n, n);
  Eigen::VectorXd payoff(n);
  StationaryProfile profile;
  for (Stage m = m0; m < m1; ++m) {
    family.ProfileInto(EffectiveDiscount(eval, m), profile);
    InducedStageDataInto(family.game(), profile, kernel, payoff);
    next.noalias() = product * kernel;
    product.swap(next);
  }
  return product;
}

double SpotCheckKernels(const StrategyFamily& leading, const StrategyFamily& lp,
                        const Evaluation& eval, int count) {
  const Stage last = Clock(eval, 1.0);
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    const Stage m =
        count == 1 ? 1 : 1 + (last - 1) * s / static_cast<Stage>(count - 1);
    const double diff = (StageKernel(leading, eval, m).kernel -
                         StageKernel(lp, eval, m).kernel)
                            .cwiseAbs()
                            .maxCoeff();
    worst = std::max(worst, diff);
  }
  return worst;
}

std::vector<double> UniformGrid(int points) {
  if (points < 2) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least 2 points");
  }
  std::vector<double> grid(points);
  for (int g = 0; g < points; ++g) {
    grid[g] = static_cast<double>(g) / (points - 1);
  }
  return grid;
}

TrajectoryCurve PropagateExact(const StrategyFamily& family,
                               const Evaluation& eval,
                               const std::vector<double>& grid, int initial) {
  CheckGrid(grid);
  const GameSpec& game = family.game();
  const int n = game.num_states();
  TrajectoryCurve curve;
  curve.grid = grid;
  for (double t : grid) curve.stages.push_back(Clock(eval, t));
  const Stage last = curve.stages.back();

  Eigen::VectorXd d = Eigen::VectorXd::Zero(n), next(n);
  d[ResolveInitial(game, initial)] = 1.0;
  Eigen::VectorXd occupation = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd kernel(n, n);
  Eigen::VectorXd payoff(n);
  StationaryProfile profile;
  double gamma = 0.0;
  size_t g = 0;
  for (Stage m = 1; m <= last; ++m) {
    family.ProfileInto(EffectiveDiscount(eval, m), profile);
    InducedStageDataInto(game, profile, kernel, payoff);
    const double w = eval.Weight(m);
    gamma += w * d.dot(payoff);
    occupation += w * d;
    while (g < grid.size() && curve.stages[g] == m) {
      curve.gamma.push_back(gamma);
      curve.marginal.push_back(d);
      curve.occupation.push_back(occupation);
      ++g;
    }
    next.noalias() = kernel.transpose() * d;
    d.swap(next);
  }
  return curve;
}

Eigen::VectorXd SimulationBatch::Frequencies(size_t g) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(num_states);
  for (int r = 0; r < n_runs; ++r) f[state(r, g)] += 1.0;
  return f / n_runs;
}

double SimulationBatch::FractionWithJumps(size_t g0, size_t g1,
                                          int count) const {
  if (g0 > g1 || g1 >= grid.size()) {
    throw Error(ErrorCode::kWindowOutOfRange, "bad grid window");
  }
  int hits = 0;
  for (int r = 0; r < n_runs; ++r) {
    int jumps_in = 0;
    for (size_t g = g0; g < g1; ++g) jumps_in += jump_count(r, g);
    if (jumps_in >= count) ++hits;
  }
  return static_cast<double>(hits) / n_runs;
}

size_t SimulationBatch::GridIndex(double t) const {
  for (size_t g = 0; g < grid.size(); ++g) {
    if (std::abs(grid[g] - t) <= 1e-12) return g;
  }
  throw Error(ErrorCode::kWindowOutOfRange,
              "time " + std::to_string(t) + " is not a grid point");
}

SimulationBatch Simulate(const StrategyFamily& family, const Evaluation& eval,
                         int n_runs, uint64_t seed,
                         const std::vector<double>& grid, int initial) {
  if (n_runs < 1) throw Error(ErrorCode::kInvalidArgument, "n_runs must be >= 1");
  CheckGrid(grid);
  const GameSpec& game = family.game();
  const int n = game.num_states();
  if (n > 65535) throw Error(ErrorCode::kInvalidArgument, "too many states");
  const size_t num_grid = grid.size();

  SimulationBatch batch;
  batch.n_runs = n_runs;
  batch.seed = seed;
  batch.grid = grid;
  batch.num_states = n;
  for (double t : grid) batch.stages.push_back(Clock(eval, t));
  batch.states.assign(static_cast<size_t>(n_runs) * num_grid, 0);
  batch.jumps.assign(static_cast<size_t>(n_runs) * (num_grid - 1), 0);

  const int start = ResolveInitial(game, initial);
  std::vector<uint16_t> state(n_runs, static_cast<uint16_t>(start));
  std::vector<RunRng> rng(n_runs);
  std::vector<double> budget(n_runs);
  for (int r = 0; r < n_runs; ++r) {
    rng[r].state = seed ^ static_cast<uint64_t>(r);
    budget[r] = rng[r].Exponential();
  }

  // Per block: kernels, cumulative finite hazards per state, and the next
  // stage at which leaving is certain.
  std::vector<Eigen::MatrixXd> kernels(kSimulationBlock,
                                       Eigen::MatrixXd(n, n));
  std::vector<std::vector<double>> hazard(n,
                                          std::vector<double>(kSimulationBlock));
  std::vector<std::vector<int>> certain(n, std::vector<int>(kSimulationBlock + 1));
  Eigen::VectorXd payoff(n);
  StationaryProfile profile;

  // Advances every run through stages [a, b); jump counts go to slot `slot`
  // when slot >= 0.
  auto advance = [&](Stage a, Stage b, long slot) {
    for (Stage block = a; block < b; block += kSimulationBlock) {
      const int len = static_cast<int>(std::min<Stage>(kSimulationBlock, b - block));
      for (int idx = 0; idx < len; ++idx) {
        family.ProfileInto(EffectiveDiscount(eval, block + idx), profile);
        InducedStageDataInto(game, profile, kernels[idx], payoff);
        for (int s = 0; s < n; ++s) {
          const double exit = 1.0 - kernels[idx](s, s);
          const double h =
              kernels[idx](s, s) > 0.0 ? -std::log1p(-std::max(0.0, exit)) : 0.0;
          hazard[s][idx] = (idx > 0 ? hazard[s][idx - 1] : 0.0) + h;
        }
      }
      for (int s = 0; s < n; ++s) {
        certain[s][len] = len;
        for (int idx = len - 1; idx >= 0; --idx) {
          certain[s][idx] = kernels[idx](s, s) > 0.0 ? certain[s][idx + 1] : idx;
        }
      }
      for (int r = 0; r < n_runs; ++r) {
        int pos = 0;
        while (pos < len) {
          const int s = state[r];
          const std::vector<double>& hs = hazard[s];
          const double base = pos > 0 ? hs[pos - 1] : 0.0;
          const double target = base + budget[r];
          int hit = static_cast<int>(
              std::lower_bound(hs.begin() + pos, hs.begin() + len, target) -
              hs.begin());
          hit = std::min(hit, certain[s][pos]);
          if (hit >= len) {
            budget[r] = target - hs[len - 1];
            break;
          }
          // Leave s at stage block + hit.
          const Eigen::MatrixXd& q = kernels[hit];
          double total = 0.0;
          for (int l = 0; l < n; ++l) {
            if (l != s) total += q(s, l);
          }
          double u = rng[r].Uniform() * total;
          int dest = -1;
          for (int l = 0; l < n; ++l) {
            if (l == s || q(s, l) <= 0.0) continue;
            dest = l;
            u -= q(s, l);
            if (u < 0.0) break;
          }
          if (dest < 0) {
            throw Error(ErrorCode::kNumericalFailure,
                        "exit without a destination");
          }
          state[r] = static_cast<uint16_t>(dest);
          if (slot >= 0) {
            uint16_t& count =
                batch.jumps[static_cast<size_t>(r) * (num_grid - 1) + slot];
            if (count < 65535) ++count;
          }
          budget[r] = rng[r].Exponential();
          pos = hit + 1;
        }
      }
    }
  };

  auto record = [&](size_t g) {
    for (int r = 0; r < n_runs; ++r) {
      batch.states[static_cast<size_t>(r) * num_grid + g] = state[r];
    }
  };

  advance(1, batch.stages[0], -1);
  record(0);
  for (size_t g = 0; g + 1 < num_grid; ++g) {
    advance(batch.stages[g], batch.stages[g + 1], static_cast<long>(g));
    record(g + 1);
  }
  return batch;
}

Eigen::MatrixXd EmpiricalGenerator(const StrategyFamily& family,
                                   const Evaluation& eval, double t,
                                   double h) {
  if (!(t >= 0.0 && h > 0.0 && t + h < 1.0)) {
    throw Error(ErrorCode::kWindowOutOfRange,
                "window must satisfy 0 <= t < t+h < 1");
  }
  const Stage m0 = Clock(eval, t), m1 = Clock(eval, t + h);
  if (m0 == m1) {
    throw Error(ErrorCode::kDegenerateWindow,
                "window [" + std::to_string(t) + ", " + std::to_string(t + h) +
                    "] contains no stage");
  }
  const Eigen::MatrixXd p = WindowKernel(family, eval, m0, m1);
  return (p - Eigen::MatrixXd::Identity(p.rows(), p.cols())) / h;
}

Eigen::MatrixXd EmpiricalGenerator(const SimulationBatch& batch, double t,
                                   double h) {
  if (!(t >= 0.0 && h > 0.0 && t + h < 1.0)) {
    throw Error(ErrorCode::kWindowOutOfRange,
                "window must satisfy 0 <= t < t+h < 1");
  }
  const size_t g0 = batch.GridIndex(t), g1 = batch.GridIndex(t + h);
  if (batch.stages[g0] == batch.stages[g1]) {
    throw Error(ErrorCode::kDegenerateWindow, "window contains no stage");
  }
  const int n = batch.num_states;
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < batch.n_runs; ++r) {
    counts(batch.state(r, g0), batch.state(r, g1)) += 1.0;
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    const double visits = counts.row(s).sum();
    if (visits == 0.0) continue;
    out.row(s) = counts.row(s) / visits;
    out(s, s) -= 1.0;
  }
  return out / h;
}

std::string CurveToCsv(
    const TrajectoryCurve& curve, const std::vector<std::string>& state_names,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
  const int n = curve.num_states();
  if (static_cast<int>(state_names.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "state names do not match curve");
  }
  std::string out;
  for (const auto& [key, value] : metadata) {
    out += "# " + key + ": " + value + "\n";
  }
  out += "t,gamma";
  for (const auto& name : state_names) out += ",marginal_" + name;
  for (const auto& name : state_names) out += ",occupation_" + name;
  out += "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
  };
  for (size_t g = 0; g < curve.grid.size(); ++g) {
    put(curve.grid[g]);
    out += ",";
    put(curve.gamma[g]);
    for (int s = 0; s < n; ++s) {
      out += ",";
      put(curve.marginal[g][s]);
    }
    for (int s = 0; s < n; ++s) {
      out += ",";
      put(curve.occupation[g][s]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace cpayoff
