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

#include "cpayoff/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "cpayoff/builtin_games.h"
#include "cpayoff/error.h"
#include "cpayoff/game_io.h"
#include "cpayoff/structure_checks.h"

namespace cpayoff {
namespace {

std::string Num(double v, const char* format = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string NormTag(double norm) { return Num(norm, "%g"); }

}  // namespace

std::vector<double> DefaultFitLadder() {
  return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
}

FittedGame FitGame(const GameSpec& game, const std::vector<double>& ladder) {
  FittedGame fitted;
  fitted.ladder = SolveLadder(game, ladder);
  fitted.expansion = FitExpansion(fitted.ladder);
  fitted.limit = EstimateLimitValue(game, ladder);
  return fitted;
}

Evaluation FamilyWithNorm(const std::string& family, double norm,
                          double alpha) {
  if (!(norm > 0.0 && norm <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "norm must lie in (0,1]");
  }
  if (family == "discounted") return Evaluation::Discounted(norm);
  if (family == "uniform") {
    return Evaluation::Uniform(static_cast<Stage>(std::llround(1.0 / norm)));
  }
  if (family == "power") return Evaluation::PowerWithNorm(alpha, norm);
  throw Error(ErrorCode::kInvalidArgument, "unknown family " + family);
}

std::string LimitPathName(LimitPath path) {
  switch (path) {
    case LimitPath::kAbsorbing:
      return "absorbing";
    case LimitPath::kCritical:
      return "critical";
    case LimitPath::kNone:
      break;
  }
  return "none";
}

TrajectoryCurve LimitModel::Curve(const std::vector<double>& grid,
                                  int initial) const {
  switch (path) {
    case LimitPath::kAbsorbing:
      if (initial != absorbing.live) {
        // Play starts in an absorbing state and stays there.
        TrajectoryCurve curve;
        const int n = static_cast<int>(limit_payoff.size());
        Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
        delta[initial] = 1.0;
        for (double t : grid) {
          curve.grid.push_back(t);
          curve.stages.push_back(0);
          curve.marginal.push_back(delta);
          curve.occupation.push_back(t * delta);
          curve.gamma.push_back(t * limit_payoff[initial]);
        }
        return curve;
      }
      return AbsorbingLimitCurve(absorbing, grid);
    case LimitPath::kCritical:
      return CriticalLimitCurve(generator, limit_payoff, grid, initial);
    case LimitPath::kNone:
      break;
  }
  throw Error(ErrorCode::kNotCoveredByTheory,
              "game is neither absorbing nor critical under the fitted "
              "expansion");
}

LimitModel BuildLimitModel(const GameSpec& game,
                           const PuiseuxExpansion& expansion) {
  LimitModel model;
  if (IsAbsorbing(game)) {
    model.path = LimitPath::kAbsorbing;
    model.absorbing = BuildAbsorbingLimitLaw(game, expansion);
    model.limit_payoff = model.absorbing.limit_payoff;
    return model;
  }
  if (auto a = CriticalityCheck(game, expansion)) {
    model.path = LimitPath::kCritical;
    model.generator = *a;
    model.limit_payoff.resize(game.num_states());
    for (int k = 0; k < game.num_states(); ++k) {
      model.limit_payoff[k] = LimitStagePayoff(game, expansion, k);
    }
  }
  return model;
}

void ExperimentConfig::Validate() const {
  if (game.empty()) throw Error(ErrorCode::kInvalidArgument, "no game given");
  if (families.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no evaluation family given");
  }
  for (const auto& f : families) {
    if (f != "discounted" && f != "uniform" && f != "power") {
      throw Error(ErrorCode::kInvalidArgument, "unknown family " + f);
    }
  }
  if (norms.empty()) throw Error(ErrorCode::kInvalidArgument, "empty ladder");
  for (size_t i = 0; i < norms.size(); ++i) {
    if (!(norms[i] > 0.0 && norms[i] <= 1.0) ||
        (i > 0 && !(norms[i] < norms[i - 1]))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "norm ladder must be strictly decreasing inside (0,1]");
    }
  }
  if (grid_points < 2) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least 2 points");
  }
  if (!(alpha > 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must be > 0");
}

VerifyResult RunVerify(const ExperimentConfig& config) {
  config.Validate();
  const GameSpec game = ResolveGame(config.game);
  const FittedGame fitted = FitGame(game);
  const LimitModel model = BuildLimitModel(game, fitted.expansion);
  const std::vector<double> grid = UniformGrid(config.grid_points);

  VerifyResult result;
  result.game_name = game.name().empty() ? "game" : game.name();
  result.initial = game.initial_state();
  result.value = fitted.limit.values[result.initial];
  result.path = model.path;
  result.covered = model.path != LimitPath::kNone;

  std::optional<TrajectoryCurve> limit;
  if (result.covered) limit = model.Curve(grid, result.initial);

  const StrategyFamily family =
      config.mode == KernelMode::kLp
          ? StrategyFamily::Lp(game)
          : StrategyFamily::LeadingTerm(game, fitted.expansion);

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
  }
  auto path_for = [&](const std::string& stem) {
    return (std::filesystem::path(config.out_dir) /
            (result.game_name + "_" + stem))
        .string();
  };
  auto emit = [&](const std::string& stem, const TrajectoryCurve& curve,
                  const std::string& descriptor) {
    if (config.out_dir.empty()) return;
    const std::string path = path_for(stem + ".csv");
    WriteFileAtomic(path,
                    CurveToCsv(curve, game.state_names(),
                               {{"game", result.game_name},
                                {"evaluation", descriptor},
                                {"mode", KernelModeName(config.mode)},
                                {"seed", std::to_string(config.seed)}}));
    result.files.push_back(path);
  };

  std::vector<std::pair<std::string, TrajectoryCurve>> finest;
  for (const auto& name : config.families) {
    for (size_t r = 0; r < config.norms.size(); ++r) {
      const double norm = config.norms[r];
      const Evaluation eval = FamilyWithNorm(name, norm, config.alpha);
      TrajectoryCurve curve = PropagateExact(family, eval, grid);
      const LinearityReport lin = LinearityCheck(curve, result.value);
      SummaryRow row;
      row.family = name;
      row.descriptor = eval.Descriptor();
      row.norm = norm;
      row.sup_error = lin.sup_error;
      row.second_difference = lin.second_difference;
      if (limit) row.limit_distance = CurveDistance(curve, *limit);
      result.rows.push_back(row);
      emit(name + "_" + NormTag(norm), curve, row.descriptor);
      if (r + 1 == config.norms.size()) finest.emplace_back(name, std::move(curve));
    }
  }
  if (limit) emit("limit", *limit, "limit:" + LimitPathName(model.path));

  if (!config.out_dir.empty()) {
    const std::string summary = path_for("summary.csv");
    WriteFileAtomic(summary, SummaryToCsv(result));
    result.files.push_back(summary);

    TrajectoryCurve line;
    line.grid = grid;
    for (double t : grid) line.gamma.push_back(t * result.value);
    std::vector<std::pair<std::string, const TrajectoryCurve*>> plotted;
    for (const auto& [name, curve] : finest) {
      plotted.emplace_back(name + " " + NormTag(config.norms.back()), &curve);
    }
    if (limit) plotted.emplace_back("limit", &*limit);
    plotted.emplace_back("t v", &line);
    const std::string svg = path_for("curves.svg");
    WriteFileAtomic(svg, RenderCurvesSvg(result.game_name, plotted));
    result.files.push_back(svg);
  }
  return result;
}

std::string SummaryToCsv(const VerifyResult& result) {
  std::string out = "# game: " + result.game_name + "\n";
  out += "# value: " + Num(result.value) + "\n";
  out += "# path: " + LimitPathName(result.path) + "\n";
  if (!result.covered) out += "# flag: NotCoveredByTheory\n";
  out += "family,evaluation,norm,sup_error,limit_distance,second_difference,"
         "covered\n";
  for (const auto& row : result.rows) {
    out += row.family + "," + row.descriptor + "," + Num(row.norm) + "," +
           Num(row.sup_error) + "," +
           (row.limit_distance ? Num(*row.limit_distance) : std::string("")) +
           "," + Num(row.second_difference) + "," +
           (result.covered ? "1" : "0") + "\n";
  }
  return out;
}

std::string RenderCurvesSvg(
    const std::string& title,
    const std::vector<std::pair<std::string, const TrajectoryCurve*>>& curves) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#7f7f7f"};
  constexpr double kWidth = 640, kHeight = 480, kMargin = 60;
  double lo = 0.0, hi = 0.0;
  for (const auto& [label, curve] : curves) {
    for (double g : curve->gamma) {
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;
  auto x = [&](double t) { return kMargin + t * (kWidth - 2 * kMargin); };
  auto y = [&](double g) {
    return kHeight - kMargin - (g - lo) / (hi - lo) * (kHeight - 2 * kMargin);
  };
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" +
         title + "</text>\n";
  out += "<line x1=\"" + Num(x(0), "%.2f") + "\" y1=\"" + Num(y(lo), "%.2f") +
         "\" x2=\"" + Num(x(1), "%.2f") + "\" y2=\"" + Num(y(lo), "%.2f") +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + Num(x(0), "%.2f") + "\" y1=\"" + Num(y(lo), "%.2f") +
         "\" x2=\"" + Num(x(0), "%.2f") + "\" y2=\"" + Num(y(hi), "%.2f") +
         "\" stroke=\"black\"/>\n";
  for (double t : {0.0, 0.5, 1.0}) {
    out += "<text x=\"" + Num(x(t), "%.2f") + "\" y=\"" +
           Num(kHeight - kMargin + 20, "%.2f") +
           "\" text-anchor=\"middle\" font-size=\"12\">" + Num(t, "%g") +
           "</text>\n";
  }
  for (double g : {lo, hi}) {
    out += "<text x=\"" + Num(kMargin - 8, "%.2f") + "\" y=\"" +
           Num(y(g) + 4, "%.2f") + "\" text-anchor=\"end\" font-size=\"12\">" +
           Num(g, "%.4g") + "</text>\n";
  }
  for (size_t c = 0; c < curves.size(); ++c) {
    const auto& [label, curve] = curves[c];
    const char* color = kColors[c % 6];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < curve->grid.size(); ++i) {
      if (i > 0) out += " ";
      out += Num(x(curve->grid[i]), "%.2f") + "," +
             Num(y(curve->gamma[i]), "%.2f");
    }
    out += "\"/>\n";
    const double ly = kMargin + 16.0 * c;
    out += "<text x=\"" + Num(kMargin + 10, "%.2f") + "\" y=\"" +
           Num(ly, "%.2f") + "\" font-size=\"12\" fill=\"" + color + "\">" +
           label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace cpayoff
