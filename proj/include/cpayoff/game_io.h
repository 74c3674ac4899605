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

#ifndef CPAYOFF_GAME_IO_H_
#define CPAYOFF_GAME_IO_H_

#include <string>
#include <string_view>

#include "cpayoff/game_model.h"

namespace cpayoff {

// Game files are JSON objects with the fields
//   name        optional string
//   states      list of state names
//   actions1    list of player-1 action names
//   actions2    list of player-2 action names
//   initial     name of the initial state
//   payoff      [state][i][j] numbers or "p/q" strings
//   transition  [state][i][j] objects mapping state name -> probability
// Any other field is rejected.
GameData ParseGameText(std::string_view text);

// ParseGameText followed by GameSpec::Validate.
GameSpec ParseGame(std::string_view text);
GameSpec LoadGameFile(const std::string& path);

// Inverse of ParseGame: probabilities and payoffs are written as exact
// "p/q" strings and zero transition entries are omitted.
std::string SerializeGame(const GameSpec& game);

// Writes to a sibling temporary file and renames it over `path`. Throws
// kInvalidArgument when the file cannot be written.
void WriteFileAtomic(const std::string& path, std::string_view contents);

}  // namespace cpayoff

#endif  // CPAYOFF_GAME_IO_H_
