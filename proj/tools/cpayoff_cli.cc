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

// Command-line front end: solve, puiseux, check, trajectory, limit, verify.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpayoff/builtin_games.h"
#include "cpayoff/discounted_solver.h"
#include "cpayoff/error.h"
#include "cpayoff/experiment.h"
#include "cpayoff/game_io.h"
#include "cpayoff/limit_theory.h"
#include "cpayoff/puiseux.h"
#include "cpayoff/structure_checks.h"
#include "cpayoff/trajectory.h"

namespace cpayoff {
namespace {

constexpr int kExitInput = 1;
constexpr int kExitNumeric = 2;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNumericalFailure:
    case ErrorCode::kMaxIterationsExceeded:
    case ErrorCode::kUnstableExponent:
    case ErrorCode::kMassOverflow:
    case ErrorCode::kQuadratureNotConverged:
    case ErrorCode::kExhaustedEvaluation:
    case ErrorCode::kDegenerateWindow:
    case ErrorCode::kNotAbsorbing:
    case ErrorCode::kNotCoveredByTheory:
      return kExitNumeric;
    default:
      return kExitInput;
  }
}

std::string Fmt(double v, const char* format = "%.10g") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, "bad number '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> ParseNames(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    WriteFileAtomic(path, text);
    std::cout << "wrote " << path << "\n";
  }
}

std::string FormatRow(const std::vector<std::string>& names,
                      const std::vector<double>& p) {
  std::string out = "[";
  for (size_t a = 0; a < p.size(); ++a) {
    if (a > 0) out += ", ";
    out += names[a] + " " + Fmt(p[a], "%.6g");
  }
  return out + "]";
}

std::string FormatMatrix(const Eigen::MatrixXd& m) {
  std::string out;
  for (int r = 0; r < m.rows(); ++r) {
    out += "  ";
    for (int c = 0; c < m.cols(); ++c) out += " " + Fmt(m(r, c), "%10.6f");
    out += "\n";
  }
  return out;
}

std::string ClassName(ActionClass c) {
  switch (c) {
    case ActionClass::kZero:
      return "I0";
    case ActionClass::kFractional:
      return "I*";
    case ActionClass::kOne:
      return "I1";
    case ActionClass::kHigher:
      break;
  }
  return "I+";
}

int CmdSolve(const std::string& game_arg, double lambda, double tol,
             const std::string& out) {
  const GameSpec game = ResolveGame(game_arg);
  DiscountedOptions options;
  options.tolerance = tol;
  const DiscountedSolution s = SolveDiscounted(game, lambda, options);
  const auto& d = game.data();
  std::cout << "game " << game.name() << "  lambda " << Fmt(lambda) << "\n"
            << "iterations " << s.iterations << "  residual "
            << Fmt(s.residual, "%.3e") << "\n";
  for (int k = 0; k < game.num_states(); ++k) {
    std::cout << "state " << d.states[k] << ": v = " << Fmt(s.values[k])
              << "  x = " << FormatRow(d.actions1, s.profile.x[k])
              << "  y = " << FormatRow(d.actions2, s.profile.y[k]) << "\n";
  }
  if (!out.empty()) {
    nlohmann::json report;
    report["game"] = game.name();
    report["lambda"] = lambda;
    report["iterations"] = s.iterations;
    report["residual"] = s.residual;
    for (int k = 0; k < game.num_states(); ++k) {
      report["values"][d.states[k]] = s.values[k];
      report["x"][d.states[k]] = s.profile.x[k];
      report["y"][d.states[k]] = s.profile.y[k];
    }
    WriteOutput(out, report.dump(2) + "\n");
  }
  return 0;
}

int CmdPuiseux(const std::string& game_arg, const std::string& ladder_arg) {
  const GameSpec game = ResolveGame(game_arg);
  const std::vector<double> ladder =
      ladder_arg.empty() ? DefaultFitLadder() : ParseList(ladder_arg);
  const auto solutions = SolveLadder(game, ladder);
  const PuiseuxExpansion e = FitExpansion(solutions);
  const ActionClassification classes = ClassifyActions(e);
  const auto& d = game.data();
  for (int k = 0; k < game.num_states(); ++k) {
    std::cout << "state " << d.states[k] << "\n";
    for (size_t i = 0; i < e.p1[k].size(); ++i) {
      const PuiseuxTerm& t = e.p1[k][i];
      std::cout << "  P1 " << d.actions1[i] << ": c " << Fmt(t.coefficient, "%.6g")
                << "  e " << t.exponent.ToString() << "  "
                << ClassName(classes.p1[k][i]) << "\n";
    }
    for (size_t j = 0; j < e.p2[k].size(); ++j) {
      const PuiseuxTerm& t = e.p2[k][j];
      std::cout << "  P2 " << d.actions2[j] << ": c " << Fmt(t.coefficient, "%.6g")
                << "  e " << t.exponent.ToString() << "  "
                << ClassName(classes.p2[k][j]) << "\n";
    }
  }
  std::cout << "fit residual " << Fmt(e.fit_residual, "%.3e") << "\n";
  return 0;
}

std::string DescribeWitness(const GameSpec& game, const HypothesisWitness& w) {
  const auto& d = game.data();
  return "states (" + d.states[w.l] + ", " + d.states[w.l2] + ", " +
         d.states[w.l3] + ")  i " + d.actions1[w.i] + "  i_bar " +
         d.actions1[w.i_bar] + "  j " + d.actions2[w.j] + "  j_bar " +
         d.actions2[w.j_bar] + "  i' " + d.actions1[w.i2] + "  j' " +
         d.actions2[w.j2];
}

int CmdCheck(const std::string& game_arg) {
  const GameSpec game = ResolveGame(game_arg);
  const auto& d = game.data();
  for (int h = 1; h <= 2; ++h) {
    const HypothesisReport r = h == 1 ? CheckH1(game) : CheckH2(game);
    std::cout << "H" << h << ": "
              << (r.holds ? std::string("holds")
                          : "violated, witness " + DescribeWitness(game, *r.witness))
              << "\n";
  }
  const auto live = IsAbsorbing(game);
  std::cout << "absorbing: "
            << (live ? "yes, live state " + d.states[*live] : std::string("no"))
            << "\n";
  try {
    const FittedGame fitted = FitGame(game);
    const auto a = CriticalityCheck(game, fitted.expansion);
    if (a) {
      std::cout << "critical: yes, A =\n" << FormatMatrix(*a);
    } else {
      std::cout << "critical: no\n";
    }
  } catch (const Error& e) {
    std::cout << "critical: undetermined (" << e.what() << ")\n";
  }
  return 0;
}

int CmdTrajectory(const std::string& game_arg, const std::string& eval_arg,
                  int grid_points, const std::string& mode_arg, uint64_t seed,
                  int runs, const std::string& out) {
  const GameSpec game = ResolveGame(game_arg);
  if (eval_arg.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--eval is required");
  }
  const Evaluation eval = Evaluation::Parse(eval_arg);
  const KernelMode mode = ParseKernelMode(mode_arg);
  const std::vector<double> grid = UniformGrid(grid_points);
  const StrategyFamily family =
      mode == KernelMode::kLp
          ? StrategyFamily::Lp(game)
          : StrategyFamily::LeadingTerm(game, FitGame(game).expansion);
  const TrajectoryCurve curve = PropagateExact(family, eval, grid);
  WriteOutput(out, CurveToCsv(curve, game.state_names(),
                              {{"game", game.name()},
                               {"evaluation", eval.Descriptor()},
                               {"mode", KernelModeName(mode)},
                               {"seed", std::to_string(seed)}}));
  if (runs > 0) {
    const SimulationBatch batch = Simulate(family, eval, runs, seed, grid);
    double worst = 0.0;
    for (size_t g = 0; g < grid.size(); ++g) {
      const Eigen::VectorXd f = batch.Frequencies(g);
      for (int s = 0; s < game.num_states(); ++s) {
        const double p = curve.marginal[g][s];
        const double sigma = std::sqrt(std::max(p * (1 - p), 1e-300) / runs);
        worst = std::max(worst, std::abs(f[s] - p) / sigma);
      }
    }
    std::cerr << "simulation: " << runs
              << " runs, largest deviation from exact marginals "
              << Fmt(worst, "%.3f") << " sigma\n";
  }
  return 0;
}

int CmdLimit(const std::string& game_arg, int grid_points,
             const std::string& out) {
  const GameSpec game = ResolveGame(game_arg);
  const FittedGame fitted = FitGame(game);
  const LimitModel model = BuildLimitModel(game, fitted.expansion);
  const TrajectoryCurve curve =
      model.Curve(UniformGrid(grid_points), game.initial_state());
  WriteOutput(out, CurveToCsv(curve, game.state_names(),
                              {{"game", game.name()},
                               {"evaluation", "limit:" + LimitPathName(model.path)}}));
  return 0;
}

int CmdVerify(const ExperimentConfig& config) {
  const VerifyResult r = RunVerify(config);
  std::cout << "game " << r.game_name << "  value " << Fmt(r.value)
            << "  limit path " << LimitPathName(r.path) << "\n";
  std::cout << "family      evaluation                sup_error     limit_distance\n";
  for (const auto& row : r.rows) {
    std::string line = row.family;
    line.resize(12, ' ');
    std::string desc = row.descriptor;
    desc.resize(26, ' ');
    std::cout << line << desc << Fmt(row.sup_error, "%.6e") << "  "
              << (row.limit_distance ? Fmt(*row.limit_distance, "%.6e")
                                     : std::string("-"))
              << "\n";
  }
  for (const auto& f : r.files) std::cout << "wrote " << f << "\n";
  if (!r.covered) {
    std::cout << "NotCoveredByTheory: the game is neither absorbing nor "
                 "critical under the fitted expansion\n";
  }
  return 0;
}

int Run(int argc, char** argv) {
  CLI::App app{"Constant-payoff experiments for zero-sum stochastic games"};
  app.require_subcommand(1);

  std::string game, eval, mode = "leading", out, ladder, families, tol_text;
  double lambda = 0.0, tol = 0.0, alpha = 0.5;
  int grid = 101, runs = 0;
  uint64_t seed = 0;

  auto* solve = app.add_subcommand("solve", "Solve a discounted game");
  solve->add_option("--game", game, "Builtin name or game file")->required();
  solve->add_option("--lambda", lambda, "Discount factor in (0,1]")->required();
  solve->add_option("--tol", tol, "Fixed-point tolerance");
  solve->add_option("--out", out, "Write a JSON report here");

  auto* puiseux = app.add_subcommand("puiseux", "Fit leading Puiseux terms");
  puiseux->add_option("--game", game, "Builtin name or game file")->required();
  puiseux->add_option("--ladder", ladder, "Comma-separated decreasing discounts");

  auto* check = app.add_subcommand("check", "Structural hypotheses");
  check->add_option("--game", game, "Builtin name or game file")->required();

  auto* trajectory = app.add_subcommand("trajectory", "Exact propagation curve");
  trajectory->add_option("--game", game, "Builtin name or game file")->required();
  trajectory->add_option("--eval", eval, "discounted:L | uniform:T | power:A,T | file:PATH");
  trajectory->add_option("--grid", grid, "Number of grid points");
  trajectory->add_option("--mode", mode, "leading or lp");
  trajectory->add_option("--seed", seed, "Simulation seed");
  trajectory->add_option("--runs", runs, "Also simulate this many plays");
  trajectory->add_option("--out", out, "CSV path (default stdout)");

  auto* limit = app.add_subcommand("limit", "Limit curve of the fitted game");
  limit->add_option("--game", game, "Builtin name or game file")->required();
  limit->add_option("--grid", grid, "Number of grid points");
  limit->add_option("--out", out, "CSV path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Constant-payoff sweep");
  verify->add_option("--game", game, "Builtin name or game file")->required();
  verify->add_option("--families", families, "Comma-separated families");
  verify->add_option("--ladder", ladder, "Comma-separated decreasing norms");
  verify->add_option("--alpha", alpha, "Power family exponent");
  verify->add_option("--grid", grid, "Number of grid points");
  verify->add_option("--mode", mode, "leading or lp");
  verify->add_option("--seed", seed, "Seed recorded in the outputs");
  verify->add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*solve) return CmdSolve(game, lambda, tol, out);
    if (*puiseux) return CmdPuiseux(game, ladder);
    if (*check) return CmdCheck(game);
    if (*trajectory) {
      return CmdTrajectory(game, eval, grid, mode, seed, runs, out);
    }
    if (*limit) return CmdLimit(game, grid, out);
    ExperimentConfig config;
    config.game = game;
    if (!families.empty()) config.families = ParseNames(families);
    if (!ladder.empty()) config.norms = ParseList(ladder);
    config.alpha = alpha;
    config.grid_points = grid;
    config.mode = ParseKernelMode(mode);
    config.seed = seed;
    config.out_dir = out;
    return CmdVerify(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace
}  // namespace cpayoff

int main(int argc, char** argv) { return cpayoff::Run(argc, argv); }
