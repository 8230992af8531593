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

#include "atlas/sim/reference_walk.hpp"

#include <cmath>

#include "atlas/core/error.hpp"

namespace atlas::sim {
namespace {

bool on_wall(const Environment& env, Position p) {
  for (const auto& w : env.walls) {
    if (w.floor != p.floor) continue;
    if (segments_intersect(p.xy(), p.xy(), w.from, w.to)) return true;
  }
  return false;
}

}  // namespace

std::vector<GridPoint> grid_points(const Environment& env, double spacing) {
  if (!(spacing > 0.0)) fail(ErrorCode::invalid_input, "grid spacing must be positive");
  const auto& b = env.bounds;
  const auto nx = static_cast<long>(std::floor((b.max_x - b.min_x) / spacing + 1e-9));
  const auto ny = static_cast<long>(std::floor((b.max_y - b.min_y) / spacing + 1e-9));
  std::vector<GridPoint> out;
  for (int floor : env.floors()) {
    for (long j = 0; j <= ny; ++j) {
      for (long i = 0; i <= nx; ++i) {
        Position p{b.min_x + static_cast<double>(i) * spacing, b.min_y + static_cast<double>(j) * spacing, floor};
        if (on_wall(env, p)) continue;
        const Area* area = env.area_at(p);
        if (!area) continue;
        out.push_back(GridPoint{p, area->label});
      }
    }
  }
  return out;
}

std::vector<GridPoint> area_centre_points(const Environment& env) {
  std::vector<GridPoint> out;
  for (const auto& a : env.areas) {
    const auto c = a.centroid();
    out.push_back(GridPoint{Position{c.x, c.y, a.floor}, a.label});
  }
  return out;
}

std::vector<pipeline::ReferenceWalk> generate_reference_walk(const Environment& env, double spacing, int dwell_s,
                                                             const PathLossParams& params, std::uint64_t seed,
                                                             const WalkOptions& options) {
  const auto points = grid_points(env, spacing);
  if (points.empty()) fail(ErrorCode::invalid_input, "reference grid contains no points");
  return walk_points(env, points, dwell_s, params, seed, options);
}

std::vector<pipeline::ReferenceWalk> walk_points(const Environment& env, std::span<const GridPoint> points,
                                                 int dwell_s, const PathLossParams& params, std::uint64_t seed,
                                                 const WalkOptions& options) {
  if (dwell_s <= 0) fail(ErrorCode::invalid_input, "dwell time must be positive");
  if (points.empty()) fail(ErrorCode::invalid_input, "reference walk has no points");

  Rng rng(seed);
  std::vector<pipeline::ReferenceWalk> walks;
  TimestampMs t = options.start_ms;
  for (const auto& gp : points) {
    pipeline::ReferenceWalk walk{gp.position, gp.area, {{}, t, t + dwell_s * 1000LL}};
    for (int s = 0; s < dwell_s; ++s) {
      const TimestampMs ts = t + s * 1000LL;
      for (const auto& beacon : env.beacons) {
        if (!in_range(env, beacon.id, gp.position, params)) continue;
        walk.window.samples.push_back(
            RssiSample::make(beacon.id, options.surveyor, rssi_at(env, beacon.id, gp.position, params, rng), ts));
      }
    }
    t = walk.window.end;
    walks.push_back(std::move(walk));
  }
  return walks;
}

}  // namespace atlas::sim
