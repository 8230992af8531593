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

// Offline studies over a scenario and its map: the per-area weight table
// and the noisy margin study behind the beacon-count experiment.

#include <optional>
#include <span>
#include <vector>

#include "atlas/localizer/localizer.hpp"
#include "atlas/sim/scenario.hpp"

namespace atlas::hub {

/// Fingerprint of a stationary user: `samples_per_beacon` one-second
/// samples from every beacon in discovery range, through the pipeline.
/// Throws Error(empty_window) when no beacon is in range.
Fingerprint probe_fingerprint(const sim::Scenario& scenario, Position position, int samples_per_beacon,
                              sim::Rng& rng, const HashedUserId& user, TimestampMs at);

struct WeightProbe {
  Position position;
  std::string true_area;
  localizer::AreaWeights weights;
  std::optional<localizer::LocalizationResult> located;
};

/// One probe per position. Throws Error(invalid_input) for a position
/// outside the environment bounds.
std::vector<WeightProbe> weight_table(const sim::Scenario& scenario, const localizer::MatchIndex& index,
                                      std::span<const Position> positions, std::uint64_t seed,
                                      int samples_per_beacon = 1);

struct MarginStudy {
  std::size_t trials = 0;
  double mean_margin = 0.0;     // top-1 minus top-2 area weight
  double mean_top_weight = 0.0;
  std::size_t correct = 0;      // trials whose top area is the true area
};

MarginStudy margin_study(const sim::Scenario& scenario, const localizer::MatchIndex& index, Position position,
                         std::size_t trials, std::uint64_t seed, int samples_per_beacon = 1);

}  // namespace atlas::hub
