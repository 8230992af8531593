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

// Scenario files: the single configuration surface of the CLI.
//
//   environment:   Environment block (see core text encoding)
//   path_loss:     {rssi_at_1m, exponent, noise_sigma}
//   kalman:        {process_variance, measurement_variance, initial_variance}
//   cycle:         {period_ms, round_trip_ms, max_parallel}
//   security:      {salt, pairing_secret, psk, store_key}   hex strings
//   setup:         {grid_spacing, dwell_s, layout: grid | area_centres}
//   simulation:    {seed, duration_s, start_ms}
//   store:         {retention_days}
//   devices:       [{id, paired, waypoints: [{t, x, y, floor}]}]   t in seconds
//
// Only `environment` is required. Missing security material is derived from
// the environment id, which is fine for simulation and nothing else.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "atlas/pipeline/pipeline.hpp"
#include "atlas/sim/world.hpp"

namespace atlas::sim {

using Key32 = std::array<std::uint8_t, 32>;

struct SecurityMaterial {
  std::vector<std::uint8_t> salt;
  Key32 pairing_secret{};
  Key32 psk{};
  Key32 store_key{};
};

enum class SurveyLayout { grid, area_centres };

struct Scenario {
  Environment environment;
  PathLossParams path_loss;
  pipeline::KalmanParams kalman;
  CycleConfig cycle;
  SecurityMaterial security;
  SurveyLayout layout = SurveyLayout::grid;
  double grid_spacing = 3.0;
  int dwell_s = 5;
  std::uint64_t seed = 1;
  std::int64_t duration_s = 60;
  TimestampMs start_ms = 1'700'000'000'000;
  int retention_days = 28;
  std::vector<SimDevice> devices;

  WorldConfig world_config() const;
};

/// Throws Error(parse_error) with a "line N:" prefix on malformed input or
/// unknown keys, Error(validation_error) on semantic problems.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

SecurityMaterial derive_demo_security(std::string_view environment_id);

}  // namespace atlas::sim
