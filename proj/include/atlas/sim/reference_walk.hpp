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

#include <cstdint>
#include <span>
#include <vector>

#include "atlas/pipeline/pipeline.hpp"
#include "atlas/sim/path_loss.hpp"

namespace atlas::sim {

struct GridPoint {
  Position position;
  std::string area;
};

/// Grid of pitch `spacing` anchored at the bounds' minimum corner, bounds
/// inclusive, per floor. Points lying on a wall or outside every area are
/// skipped.
std::vector<GridPoint> grid_points(const Environment& env, double spacing);

struct WalkOptions {
  TimestampMs start_ms = 1'600'000'000'000;
  /// Hashed id the surveying device's samples are recorded under.
  HashedUserId surveyor{};
};

/// Dwells `dwell_s` seconds at each grid point and records one sample per
/// second from every beacon in discovery range. Throws
/// Error(invalid_input) when the grid is empty.
std::vector<pipeline::ReferenceWalk> generate_reference_walk(const Environment& env, double spacing, int dwell_s,
                                                             const PathLossParams& params, std::uint64_t seed,
                                                             const WalkOptions& options = {});

/// One point at the centroid of every area.
std::vector<GridPoint> area_centre_points(const Environment& env);

/// Same survey over an explicit point list, visited in order.
std::vector<pipeline::ReferenceWalk> walk_points(const Environment& env, std::span<const GridPoint> points,
                                                 int dwell_s, const PathLossParams& params, std::uint64_t seed,
                                                 const WalkOptions& options = {});

}  // namespace atlas::sim
