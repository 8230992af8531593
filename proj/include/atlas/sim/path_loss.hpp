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

#include <random>

#include "atlas/core/types.hpp"

namespace atlas::sim {

struct PathLossParams {
  double rssi_at_1m = -45.0;      // dBm
  double exponent = 2.5;          // log-distance path-loss exponent n
  double noise_sigma = 2.0;       // dB

  void validate() const;
};

/// Beacons whose noiseless RSSI falls below this are not discovered.
inline constexpr double kDiscoveryThresholdDbm = -100.0;
inline constexpr double kMinDistanceM = 0.1;

using Rng = std::mt19937_64;

/// 3-D distance; floors are stacked floor_height_m apart.
double distance_m(const Environment& env, Position a, Position b);

/// Sum of attenuation of walls crossed by the straight path from `from` to
/// `to`, plus floor_attenuation_db per floor crossed.
double obstruction_db(const Environment& env, Position from, Position to);

/// Log-distance model without noise or clamping.
double expected_rssi(const Environment& env, const BeaconId& beacon, Position at, const PathLossParams& params);

bool in_range(const Environment& env, const BeaconId& beacon, Position at, const PathLossParams& params);

/// expected_rssi + N(0, noise_sigma), clamped to [-110, 0].
/// Throws Error(unknown_beacon) if `beacon` is not deployed in `env`.
double rssi_at(const Environment& env, const BeaconId& beacon, Position at, const PathLossParams& params, Rng& rng);

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2);

}  // namespace atlas::sim
