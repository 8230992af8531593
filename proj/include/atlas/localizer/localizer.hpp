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

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "atlas/core/types.hpp"

namespace atlas::localizer {

/// Candidates sharing fewer beacons than this with the user are discarded.
inline constexpr std::size_t kMinCommonBeacons = 2;

struct MatchWeight {
  ReferencePointId reference_point;
  double distance = 0.0;  // RMS RSSI difference over common beacons, dB
  double weight = 0.0;    // 1 / (1 + distance)

  bool operator==(const MatchWeight&) const = default;
};

double weight_from_distance(double distance);

struct LocalizationResult {
  HashedUserId user;
  MatchWeight best;
  std::optional<MatchWeight> runner_up;
  double margin = 0.0;
  TimestampMs timestamp = 0;
};

enum class MatchRule {
  // Maximum similarity 1/(1+d), i.e. the nearest fingerprint.
  similarity,
  // Maximum raw accumulated distance, exactly as the pseudocode's max() reads.
  // Picks the farthest candidate; kept for comparison only.
  literal_max_distance,
};

struct LocalizeOptions {
  MatchRule rule = MatchRule::similarity;
};

std::set<BeaconId> common_beacons(const Fingerprint& a, const Fingerprint& b);

/// nullopt when fewer than two beacons are shared.
std::optional<double> fingerprint_distance(const Fingerprint& user, const Fingerprint& ref);

/// Column-major view of a fingerprint map used by the matching kernels.
/// Immutable once built; share it across threads freely.
class MatchIndex {
 public:
  explicit MatchIndex(const FingerprintMap& map);

  const FingerprintMap& map() const { return map_; }
  std::size_t size() const { return map_.points.size(); }

  /// Distance to every reference point in map order; nullopt where fewer
  /// than two beacons are shared.
  std::vector<std::optional<double>> distances(const Fingerprint& user) const;

 private:
  FingerprintMap map_;
  std::map<BeaconId, std::size_t> column_of_;
  std::vector<std::vector<double>> rssi_columns_;
  std::vector<std::vector<double>> present_columns_;
};

/// Applicable candidates ordered best first (ascending distance, ties by id).
std::vector<MatchWeight> rank_candidates(const Fingerprint& user, const MatchIndex& index,
                                         const LocalizeOptions& options = {});

/// nullopt = unlocatable. Throws Error(invalid_input) on an empty map.
std::optional<LocalizationResult> localize(const Fingerprint& user, const MatchIndex& index,
                                           const LocalizeOptions& options = {});
std::optional<LocalizationResult> localize(const Fingerprint& user, const FingerprintMap& map,
                                           const LocalizeOptions& options = {});

struct BatchResult {
  std::map<HashedUserId, LocationRecord> located;
  std::vector<HashedUserId> unlocatable;
};

/// Fingerprints must be owned by users. A user appearing twice keeps the
/// later fingerprint's result.
BatchResult localize_batch(const std::vector<Fingerprint>& users, const MatchIndex& index,
                           const LocalizeOptions& options = {});
BatchResult localize_batch(const std::vector<Fingerprint>& users, const FingerprintMap& map,
                           const LocalizeOptions& options = {});

/// Best weight per area label plus the gap between the top two areas.
struct AreaWeights {
  std::map<std::string, double> best_weight;
  std::string top_area;
  double margin = 0.0;
};

AreaWeights area_weights(const Fingerprint& user, const MatchIndex& index);

}  // namespace atlas::localizer
