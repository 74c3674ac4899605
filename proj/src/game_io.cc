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

#include "cpayoff/game_io.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cpayoff/error.h"
#include "json.hpp"

namespace cpayoff {
namespace {

using nlohmann::json;

[[noreturn]] void FieldError(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kParseError, "field '" + field + "': " + what);
}

const json& Require(const json& root, const std::string& field) {
  auto it = root.find(field);
  if (it == root.end()) FieldError(field, "missing");
  return *it;
}

std::vector<std::string> NameList(const json& root, const std::string& field) {
  const json& node = Require(root, field);
  if (!node.is_array() || node.empty()) {
    FieldError(field, "expected a nonempty list of names");
  }
  std::vector<std::string> names;
  for (const json& item : node) {
    if (!item.is_string()) FieldError(field, "names must be strings");
    std::string name = item.get<std::string>();
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      FieldError(field, "duplicate name '" + name + "'");
    }
    names.push_back(std::move(name));
  }
  return names;
}

Rational Number(const json& node, const std::string& field) {
  try {
    if (node.is_string()) return ParseRational(node.get<std::string>());
    if (node.is_number_integer()) {
      return Rational(node.get<long long>());
    }
    if (node.is_number_unsigned()) {
      return Rational(node.get<unsigned long long>());
    }
    if (node.is_number_float()) return RationalFromDouble(node.get<double>());
  } catch (const Error& e) {
    FieldError(field, e.what());
  }
  FieldError(field, "expected a number or a \"p/q\" string");
}

// Walks the [state][i][j] nesting shared by payoff and transition.
template <typename Fn>
void ForEachCell(const json& node, const std::string& field, size_t n_states,
                 Fn&& fn) {
  if (!node.is_array() || node.size() != n_states) {
    FieldError(field, "expected one entry per state");
  }
  for (size_t k = 0; k < n_states; ++k) {
    const std::string at_k = field + "[" + std::to_string(k) + "]";
    if (!node[k].is_array()) FieldError(at_k, "expected a list of rows");
    for (size_t i = 0; i < node[k].size(); ++i) {
      const std::string at_i = at_k + "[" + std::to_string(i) + "]";
      if (!node[k][i].is_array()) FieldError(at_i, "expected a list");
      for (size_t j = 0; j < node[k][i].size(); ++j) {
        fn(k, i, j, node[k][i][j],
           at_i + "[" + std::to_string(j) + "]");
      }
    }
  }
}

template <typename T>
void Place(Tensor3<T>& tensor, size_t k, size_t i, size_t j, T value) {
  if (tensor.size() <= k) tensor.resize(k + 1);
  if (tensor[k].size() <= i) tensor[k].resize(i + 1);
  if (tensor[k][i].size() <= j) tensor[k][i].resize(j + 1);
  tensor[k][i][j] = std::move(value);
}

}  // namespace

GameData ParseGameText(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw Error(ErrorCode::kParseError, "game file must hold a JSON object");
  }
  static const char* kKnown[] = {"name",    "states", "actions1",  "actions2",
                                 "initial", "payoff", "transition"};
  for (const auto& item : root.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), item.key()) ==
        std::end(kKnown)) {
      FieldError(item.key(), "unknown field");
    }
  }

  GameData data;
  if (auto it = root.find("name"); it != root.end()) {
    if (!it->is_string()) FieldError("name", "expected a string");
    data.name = it->get<std::string>();
  }
  data.states = NameList(root, "states");
  data.actions1 = NameList(root, "actions1");
  data.actions2 = NameList(root, "actions2");
  std::map<std::string, int> index;
  for (size_t k = 0; k < data.states.size(); ++k) {
    index[data.states[k]] = static_cast<int>(k);
  }

  const json& initial = Require(root, "initial");
  if (!initial.is_string()) FieldError("initial", "expected a state name");
  auto init_it = index.find(initial.get<std::string>());
  if (init_it == index.end()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "field 'initial': unknown state '" + initial.get<std::string>() +
                    "'");
  }
  data.initial = init_it->second;

  const size_t n = data.states.size();
  data.payoff.assign(n, {});
  data.transition.assign(n, {});
  ForEachCell(Require(root, "payoff"), "payoff", n,
              [&](size_t k, size_t i, size_t j, const json& cell,
                  const std::string& where) {
                Place(data.payoff, k, i, j, Number(cell, where));
              });
  ForEachCell(Require(root, "transition"), "transition", n,
              [&](size_t k, size_t i, size_t j, const json& cell,
                  const std::string& where) {
                if (!cell.is_object()) {
                  FieldError(where, "expected a map from state name to "
                                    "probability");
                }
                std::vector<Rational> row(n, Rational(0));
                for (const auto& entry : cell.items()) {
                  auto target = index.find(entry.key());
                  if (target == index.end()) {
                    throw Error(ErrorCode::kIndexOutOfRange,
                                "field '" + where + "': unknown state '" +
                                    entry.key() + "'");
                  }
                  row[target->second] =
                      Number(entry.value(), where + "." + entry.key());
                }
                Place(data.transition, k, i, j, std::move(row));
              });
  return data;
}

GameSpec ParseGame(std::string_view text) {
  return GameSpec::Validate(ParseGameText(text));
}

GameSpec LoadGameFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseGame(buffer.str());
}

std::string SerializeGame(const GameSpec& game) {
  const GameData& data = game.data();
  json root;
  if (!data.name.empty()) root["name"] = data.name;
  root["states"] = data.states;
  root["actions1"] = data.actions1;
  root["actions2"] = data.actions2;
  root["initial"] = data.states[data.initial];
  json payoff = json::array();
  json transition = json::array();
  for (int k = 0; k < game.num_states(); ++k) {
    json p_rows = json::array();
    json t_rows = json::array();
    for (int i = 0; i < game.num_actions1(); ++i) {
      json p_row = json::array();
      json t_row = json::array();
      for (int j = 0; j < game.num_actions2(); ++j) {
        p_row.push_back(FormatRational(data.payoff[k][i][j]));
        json cell = json::object();
        for (int l = 0; l < game.num_states(); ++l) {
          const Rational& p = data.transition[k][i][j][l];
          if (p != 0) cell[data.states[l]] = FormatRational(p);
        }
        t_row.push_back(std::move(cell));
      }
      p_rows.push_back(std::move(p_row));
      t_rows.push_back(std::move(t_row));
    }
    payoff.push_back(std::move(p_rows));
    transition.push_back(std::move(t_rows));
  }
  root["payoff"] = std::move(payoff);
  root["transition"] = std::move(transition);
  return root.dump(2) + "\n";
}

void WriteFileAtomic(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kInvalidArgument, "cannot write " + tmp);
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot rename " + tmp + ": " + ec.message());
  }
}

}  // namespace cpayoff
