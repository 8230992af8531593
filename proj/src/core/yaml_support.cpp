// Copyright 2026 The Atlas Authors
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

#include "atlas/core/yaml_support.hpp"

#include <algorithm>

namespace atlas::yamlio {

std::string where(const YAML::Node& node) {
  auto mark = node.Mark();
  if (mark.line < 0) return "line ?";
  return "line " + std::to_string(mark.line + 1);
}

void parse_fail(const YAML::Node& node, const std::string& message) {
  fail(ErrorCode::parse_error, where(node) + ": " + message);
}

YAML::Node load(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    fail(ErrorCode::parse_error, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

void require_map(const YAML::Node& node, std::string_view what) {
  if (!node.IsMap()) parse_fail(node, std::string(what) + " must be a mapping");
}

void require_sequence(const YAML::Node& node, std::string_view what) {
  if (!node.IsSequence()) parse_fail(node, std::string(what) + " must be a list");
}

void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed, std::string_view what) {
  require_map(node, what);
  for (const auto& kv : node) {
    auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      parse_fail(kv.first, "unknown key '" + key + "' in " + std::string(what));
  }
}

bool has(const YAML::Node& node, std::string_view key) {
  return node.IsMap() && node[std::string(key)].IsDefined();
}

YAML::Node field(const YAML::Node& node, std::string_view key) {
  if (!has(node, key)) parse_fail(node, "missing required key '" + std::string(key) + "'");
  return node[std::string(key)];
}

double as_real(const YAML::Node& node) {
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    parse_fail(node, "expected a number");
  }
}

double real(const YAML::Node& node, std::string_view key) { return as_real(field(node, key)); }

double real_or(const YAML::Node& node, std::string_view key, double fallback) {
  return has(node, key) ? real(node, key) : fallback;
}

std::int64_t integer(const YAML::Node& node, std::string_view key) {
  auto n = field(node, key);
  try {
    return n.as<std::int64_t>();
  } catch (const YAML::Exception&) {
    parse_fail(n, "expected an integer for '" + std::string(key) + "'");
  }
}

std::int64_t integer_or(const YAML::Node& node, std::string_view key, std::int64_t fallback) {
  return has(node, key) ? integer(node, key) : fallback;
}

std::string string(const YAML::Node& node, std::string_view key) {
  auto n = field(node, key);
  if (!n.IsScalar()) parse_fail(n, "expected a string for '" + std::string(key) + "'");
  return n.as<std::string>();
}

bool boolean_or(const YAML::Node& node, std::string_view key, bool fallback) {
  if (!has(node, key)) return fallback;
  auto n = field(node, key);
  try {
    return n.as<bool>();
  } catch (const YAML::Exception&) {
    parse_fail(n, "expected true/false for '" + std::string(key) + "'");
  }
}

Position position(const YAML::Node& node) {
  check_keys(node, {"x", "y", "floor"}, "position");
  return Position{real(node, "x"), real(node, "y"), static_cast<int>(integer_or(node, "floor", 0))};
}

Point2 point(const YAML::Node& node) {
  if (!node.IsSequence() || node.size() != 2) parse_fail(node, "point must be [x, y]");
  return Point2{as_real(node[0]), as_real(node[1])};
}

}  // namespace atlas::yamlio
