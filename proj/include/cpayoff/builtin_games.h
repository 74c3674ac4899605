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

#ifndef CPAYOFF_BUILTIN_GAMES_H_
#define CPAYOFF_BUILTIN_GAMES_H_

#include <string>
#include <vector>

#include "cpayoff/game_model.h"

namespace cpayoff {

// big_match   Big Match with absorbing states "one" and "zero".
// const5      one state, payoff 5.
// absorbing3  absorbing game where both players exit at order lambda.
// two_state   two states with order-one transitions.
// cycle3      three states with a return path that violates H1.
// critical2   two Big-Match-like live states that exit into each other.
std::vector<std::string> BuiltinGameNames();
GameSpec BuiltinGame(const std::string& name);

// A builtin name, or else a path to a game file.
GameSpec ResolveGame(const std::string& name_or_path);

}  // namespace cpayoff

#endif  // CPAYOFF_BUILTIN_GAMES_H_
