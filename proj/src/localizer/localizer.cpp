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

#include "atlas/localizer/localizer.hpp"

#include <algorithm>
#include <cmath>

#include "atlas/core/error.hpp"
#include "atlas/kernels/rms.hpp"

namespace atlas::localizer {

double weight_from_distance(double distance) { return 1.0 / (1.0 + distance); }

std::set<BeaconId> common_beacons(const Fingerprint& a, const Fingerprint& b) {
  std::set<BeaconId> out;
  for (const auto& [beacon, rssi] : a.entries()) {
    if (b.entries().count(beacon)) out.insert(beacon);
  }
  return out;
}

std::optional<double> fingerprint_distance(const Fingerprint& user, const Fingerprint& ref) {
  double sum = 0.0;
  double count = 0.0;
  for (const auto& [beacon, value] : user.entries()) {
    auto other = ref.rssi(beacon);
    if (!other) continue;
    const double d = value - *other;
    sum += d * d;
    count += 1.0;
  }
  if (count < static_cast<double>(kMinCommonBeacons)) return std::nullopt;
  return std::sqrt(sum / count);
}

MatchIndex::MatchIndex(const FingerprintMap& map) : map_(map) {
  map_.validate();
  for (const auto& p : map_.points) {
    for (const auto& [beacon, rssi] : p.fingerprint.entries()) column_of_.emplace(beacon, 0);
  }
  std::size_t col = 0;
  for (auto& [beacon, index] : column_of_) index = col++;

  const std::size_t n = map_.points.size();
  rssi_columns_.assign(column_of_.size(), std::vector<double>(n, 0.0));
  present_columns_.assign(column_of_.size(), std::vector<double>(n, 0.0));
  for (std::size_t p = 0; p < n; ++p) {
    for (const auto& [beacon, rssi] : map_.points[p].fingerprint.entries()) {
      const std::size_t c = column_of_.at(beacon);
      rssi_columns_[c][p] = rssi;
      present_columns_[c][p] = 1.0;
    }
  }
}

std::vector<std::optional<double>> MatchIndex::distances(const Fingerprint& user) const {
  const std::size_t n = map_.points.size();
  std::vector<double> sum(n, 0.0), count(n, 0.0), distance(n, -1.0);
  // Beacons are visited in BeaconId order, matching fingerprint_distance.
  for (const auto& [beacon, value] : user.entries()) {
    auto it = column_of_.find(beacon);
    if (it == column_of_.end()) continue;
    kernels::accumulate_squared_diff(value, rssi_columns_[it->second], present_columns_[it->second], sum, count);
  }
  kernels::finalize_rms(sum, count, static_cast<double>(kMinCommonBeacons), distance);

  std::vector<std::optional<double>> out(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (distance[p] >= 0.0) out[p] = distance[p];
  }
  return out;
}

std::vector<MatchWeight> rank_candidates(const Fingerprint& user, const MatchIndex& index,
                                         const LocalizeOptions& options) {
  if (index.size() == 0) fail(ErrorCode::invalid_input, "cannot localize against an empty fingerprint map");
  const auto distances = index.distances(user);
  std::vector<MatchWeight> ranked;
  for (std::size_t p = 0; p < distances.size(); ++p) {
    if (!distances[p]) continue;
    ranked.push_back(MatchWeight{index.map().points[p].id, *distances[p], weight_from_distance(*distances[p])});
  }
  const bool farthest = options.rule == MatchRule::literal_max_distance;
  std::sort(ranked.begin(), ranked.end(), [farthest](const MatchWeight& a, const MatchWeight& b) {
    if (a.distance != b.distance) return farthest ? a.distance > b.distance : a.distance < b.distance;
    return a.reference_point < b.reference_point;
  });
  return ranked;
}

std::optional<LocalizationResult> localize(const Fingerprint& user, const MatchIndex& index,
                                           const LocalizeOptions& options) {
  auto ranked = rank_candidates(user, index, options);
  if (ranked.empty()) return std::nullopt;

  LocalizationResult result;
  if (const auto* id = std::get_if<HashedUserId>(&user.owner())) result.user = *id;
  result.timestamp = user.timestamp();
  result.best = ranked[0];
  if (ranked.size() > 1) {
    result.runner_up = ranked[1];
    // Under the literal rule the list is ordered by falling distance, so the
    // weights rise; the margin is only meaningful for the similarity rule.
    result.margin = std::max(0.0, result.best.weight - result.runner_up->weight);
  }
  return result;
}

std::optional<LocalizationResult> localize(const Fingerprint& user, const FingerprintMap& map,
                                           const LocalizeOptions& options) {
  if (map.points.empty()) fail(ErrorCode::invalid_input, "cannot localize against an empty fingerprint map");
  return localize(user, MatchIndex(map), options);
}

BatchResult localize_batch(const std::vector<Fingerprint>& users, const MatchIndex& index,
                           const LocalizeOptions& options) {
  if (index.size() == 0) fail(ErrorCode::invalid_input, "cannot localize against an empty fingerprint map");
  BatchResult out;
  for (const auto& fp : users) {
    const auto* user = std::get_if<HashedUserId>(&fp.owner());
    if (!user) fail(ErrorCode::invalid_input, "batch localization expects user-owned fingerprints");
    auto result = localize(fp, index, options);
    if (!result) {
      out.located.erase(*user);
      out.unlocatable.push_back(*user);
      continue;
    }
    const auto* point = index.map().find(result->best.reference_point);
    out.located[*user] =
        LocationRecord{*user, point->area, result->best.reference_point, result->best.weight, fp.timestamp()};
    std::erase(out.unlocatable, *user);
  }
  return out;
}

BatchResult localize_batch(const std::vector<Fingerprint>& users, const FingerprintMap& map,
                           const LocalizeOptions& options) {
  if (map.points.empty()) fail(ErrorCode::invalid_input, "cannot localize against an empty fingerprint map");
  return localize_batch(users, MatchIndex(map), options);
}

AreaWeights area_weights(const Fingerprint& user, const MatchIndex& index) {
  AreaWeights out;
  for (const auto& m : rank_candidates(user, index)) {
    const auto& area = index.map().find(m.reference_point)->area;
    auto [it, inserted] = out.best_weight.emplace(area, m.weight);
    if (!inserted) it->second = std::max(it->second, m.weight);
  }
  std::vector<std::pair<double, std::string>> ordered;
  for (const auto& [area, w] : out.best_weight) ordered.emplace_back(w, area);
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (!ordered.empty()) out.top_area = ordered[0].second;
  if (ordered.size() > 1) out.margin = ordered[0].first - ordered[1].first;
  return out;
}

}  // namespace atlas::localizer
