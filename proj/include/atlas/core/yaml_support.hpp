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

#pragma once

// Helpers shared by the text parsers: strict key checking and typed field
// access that report the source line of the offending node.

#include <initializer_list>
#include <string>
#include <string_view>

#include <yaml-cpp/yaml.h>

#include "atlas/core/error.hpp"
#include "atlas/core/types.hpp"

namespace atlas::yamlio {

std::string where(const YAML::Node& node);

[[noreturn]] void parse_fail(const YAML::Node& node, const std::string& message);

YAML::Node load(std::string_view text);

void require_map(const YAML::Node& node, std::string_view what);
void require_sequence(const YAML::Node& node, std::string_view what);
void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed,
                std::string_view what);

YAML::Node field(const YAML::Node& node, std::string_view key);
bool has(const YAML::Node& node, std::string_view key);

double real(const YAML::Node& node, std::string_view key);
double real_or(const YAML::Node& node, std::string_view key, double fallback);
std::int64_t integer(const YAML::Node& node, std::string_view key);
std::int64_t integer_or(const YAML::Node& node, std::string_view key, std::int64_t fallback);
std::string string(const YAML::Node& node, std::string_view key);
bool boolean_or(const YAML::Node& node, std::string_view key, bool fallback);

double as_real(const YAML::Node& node);

Position position(const YAML::Node& node);
Point2 point(const YAML::Node& node);

// Node-level codecs, reused by the scenario file format.
Environment environment_from(const YAML::Node& node);
void emit_environment(YAML::Emitter& out, const Environment& env);

}  // namespace atlas::yamlio
