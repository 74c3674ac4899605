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

#include "cpayoff/builtin_games.h"

#include <functional>
#include <map>

#include "cpayoff/error.h"
#include "cpayoff/game_io.h"

namespace cpayoff {
namespace {

// Cell payoff g, moving to state `to` with probability one.
struct Cell {
  Rational payoff;
  int to;
};

GameData Skeleton(const std::string& name, std::vector<std::string> states,
                  std::vector<std::string> actions1,
                  std::vector<std::string> actions2) {
  GameData d;
  d.name = name;
  d.states = std::move(states);
  d.actions1 = std::move(actions1);
  d.actions2 = std::move(actions2);
  const size_t n = d.states.size();
  d.payoff.assign(n, std::vector<std::vector<Rational>>(
                         d.actions1.size(),
                         std::vector<Rational>(d.actions2.size(), Rational(0))));
  d.transition.assign(
      n, std::vector<std::vector<std::vector<Rational>>>(
             d.actions1.size(),
             std::vector<std::vector<Rational>>(
                 d.actions2.size(), std::vector<Rational>(n, Rational(0)))));
  return d;
}

void SetCell(GameData& d, int k, int i, int j, Cell cell) {
  d.payoff[k][i][j] = cell.payoff;
  d.transition[k][i][j][cell.to] = 1;
}

// Constant payoff g and no exit, for every action pair.
void MakeAbsorbing(GameData& d, int k, Rational g) {
  for (size_t i = 0; i < d.actions1.size(); ++i)
    for (size_t j = 0; j < d.actions2.size(); ++j) SetCell(d, k, i, j, {g, k});
}

GameData BigMatch() {
  GameData d = Skeleton("big_match", {"live", "one", "zero"}, {"Top", "Bottom"},
                        {"Left", "Right"});
  SetCell(d, 0, 0, 0, {1, 1});
  SetCell(d, 0, 0, 1, {0, 2});
  SetCell(d, 0, 1, 0, {0, 0});
  SetCell(d, 0, 1, 1, {1, 0});
  MakeAbsorbing(d, 1, 1);
  MakeAbsorbing(d, 2, 0);
  return d;
}

GameData Const5() {
  GameData d = Skeleton("const5", {"s"}, {"a"}, {"b"});
  MakeAbsorbing(d, 0, 5);
  return d;
}

GameData Absorbing3() {
  GameData d = Skeleton("absorbing3", {"live", "one", "zero"},
                        {"U", "D", "T"}, {"L", "R", "X"});
  SetCell(d, 0, 0, 0, {2, 0});
  SetCell(d, 0, 0, 1, {0, 0});
  SetCell(d, 0, 0, 2, {0, 2});
  SetCell(d, 0, 1, 0, {0, 0});
  SetCell(d, 0, 1, 1, {0, 0});
  SetCell(d, 0, 1, 2, {1, 1});
  SetCell(d, 0, 2, 0, {0, 2});
  SetCell(d, 0, 2, 1, {1, 1});
  d.payoff[0][2][2] = Rational(1, 2);
  d.transition[0][2][2][1] = Rational(1, 2);
  d.transition[0][2][2][2] = Rational(1, 2);
  MakeAbsorbing(d, 1, 1);
  MakeAbsorbing(d, 2, 0);
  return d;
}

GameData TwoState() {
  GameData d = Skeleton("two_state", {"a", "b"}, {"a1", "a2"}, {"b1", "b2"});
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        d.payoff[k][i][j] = Rational(i == j ? 1 : 0) + Rational(k);
        d.transition[k][i][j][0] = Rational(1, 2);
        d.transition[k][i][j][1] = Rational(1, 2);
      }
    }
  }
  return d;
}

GameData Cycle3() {
  GameData d = Skeleton("cycle3", {"s0", "s1", "s2"}, {"go1", "go2"}, {"b"});
  SetCell(d, 0, 0, 0, {0, 1});
  SetCell(d, 0, 1, 0, {0, 2});
  MakeAbsorbing(d, 1, 1);
  d.transition[1][0][0][1] = 0;
  d.transition[1][1][0][1] = 0;
  d.transition[1][0][0][0] = 1;
  d.transition[1][1][0][0] = 1;
  MakeAbsorbing(d, 2, Rational(1, 2));
  return d;
}

// Two live states, each a Big Match for Player 1. From s0 the exits are
// "one" and s1; from s1 they are s0 and "zero".
GameData Critical2() {
  GameData d = Skeleton("critical2", {"s0", "s1", "one", "zero"},
                        {"Top", "Bottom"}, {"Left", "Right"});
  SetCell(d, 0, 0, 0, {1, 2});
  SetCell(d, 0, 0, 1, {0, 1});
  SetCell(d, 0, 1, 0, {0, 0});
  SetCell(d, 0, 1, 1, {1, 0});
  SetCell(d, 1, 0, 0, {0, 0});
  SetCell(d, 1, 0, 1, {0, 3});
  SetCell(d, 1, 1, 0, {0, 1});
  SetCell(d, 1, 1, 1, {1, 1});
  MakeAbsorbing(d, 2, 1);
  MakeAbsorbing(d, 3, 0);
  return d;
}

const std::map<std::string, std::function<GameData()>>& Registry() {
  static const auto* registry =
      new std::map<std::string, std::function<GameData()>>{
          {"big_match", BigMatch}, {"const5", Const5},
          {"absorbing3", Absorbing3}, {"two_state", TwoState},
          {"cycle3", Cycle3}, {"critical2", Critical2}};
  return *registry;
}

}  // namespace

std::vector<std::string> BuiltinGameNames() {
  return {"big_match", "const5", "absorbing3", "two_state", "cycle3",
          "critical2"};
}

GameSpec BuiltinGame(const std::string& name) {
  auto it = Registry().find(name);
  if (it == Registry().end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown builtin game " + name);
  }
  return GameSpec::Validate(it->second());
}

GameSpec ResolveGame(const std::string& name_or_path) {
  if (Registry().count(name_or_path)) return BuiltinGame(name_or_path);
  return LoadGameFile(name_or_path);
}

}  // namespace cpayoff
