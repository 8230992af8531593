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

#include "atlas/sim/path_loss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "atlas/core/error.hpp"

namespace atlas::sim {
namespace {

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

bool within_box(Point2 p, Point2 a, Point2 b) {
  constexpr double eps = 1e-12;
  return p.x >= std::min(a.x, b.x) - eps && p.x <= std::max(a.x, b.x) + eps && p.y >= std::min(a.y, b.y) - eps &&
         p.y <= std::max(a.y, b.y) + eps;
}

int sign(double v) {
  constexpr double eps = 1e-12;
  return v > eps ? 1 : (v < -eps ? -1 : 0);
}

const BeaconPlacement& require_beacon(const Environment& env, const BeaconId& beacon) {
  const auto* b = env.find_beacon(beacon);
  if (!b) fail(ErrorCode::unknown_beacon, "beacon " + beacon.to_string() + " is not deployed in " + env.id);
  return *b;
}

}  // namespace

void PathLossParams::validate() const {
  if (rssi_at_1m < -70.0 || rssi_at_1m > -30.0) fail(ErrorCode::validation_error, "rssi_at_1m must lie in [-70, -30]");
  if (exponent < 1.5 || exponent > 4.5) fail(ErrorCode::validation_error, "path-loss exponent must lie in [1.5, 4.5]");
  if (noise_sigma < 0.0) fail(ErrorCode::validation_error, "noise_sigma must be >= 0");
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && within_box(p1, q1, q2)) return true;
  if (d2 == 0 && within_box(p2, q1, q2)) return true;
  if (d3 == 0 && within_box(q1, p1, p2)) return true;
  if (d4 == 0 && within_box(q2, p1, p2)) return true;
  return false;
}

double distance_m(const Environment& env, Position a, Position b) {
  const double dz = (a.floor - b.floor) * env.floor_height_m;
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + dz * dz);
}

double obstruction_db(const Environment& env, Position from, Position to) {
  double total = 0.0;
  for (const auto& w : env.walls) {
    if (w.floor != from.floor && w.floor != to.floor) continue;
    if (segments_intersect(from.xy(), to.xy(), w.from, w.to)) total += w.attenuation_db;
  }
  total += std::abs(from.floor - to.floor) * env.floor_attenuation_db;
  return total;
}

double expected_rssi(const Environment& env, const BeaconId& beacon, Position at, const PathLossParams& params) {
  const auto& b = require_beacon(env, beacon);
  const double d = std::max(distance_m(env, b.position, at), kMinDistanceM);
  return params.rssi_at_1m - 10.0 * params.exponent * std::log10(d) - obstruction_db(env, b.position, at);
}

bool in_range(const Environment& env, const BeaconId& beacon, Position at, const PathLossParams& params) {
  return expected_rssi(env, beacon, at, params) >= kDiscoveryThresholdDbm;
}

double rssi_at(const Environment& env, const BeaconId& beacon, Position at, const PathLossParams& params, Rng& rng) {
  double value = expected_rssi(env, beacon, at, params);
  if (params.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, params.noise_sigma);
    value += noise(rng);
  }
  return std::clamp(value, kMinRssi, kMaxRssi);
}

}  // namespace atlas::sim
