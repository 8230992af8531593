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

#include "atlas/pipeline/pipeline.hpp"

#include <algorithm>
#include <cstdio>

#include "atlas/core/error.hpp"
#include "atlas/core/text_io.hpp"

namespace atlas::pipeline {

void KalmanParams::validate() const {
  if (!(process_variance > 0.0 && measurement_variance > 0.0 && initial_variance > 0.0))
    fail(ErrorCode::invalid_input, "Kalman variances Q, R and P0 must all be positive");
}

void SampleWindow::validate() const {
  if (end < start) fail(ErrorCode::invalid_input, "sample window ends before it starts");
  for (const auto& s : samples) {
    if (s.timestamp < start || s.timestamp >= end)
      fail(ErrorCode::invalid_input, "sample at " + std::to_string(s.timestamp) + " outside window [" +
                                         std::to_string(start) + ", " + std::to_string(end) + ")");
  }
}

SampleStreams sort_and_group(std::span<const RssiSample> samples) {
  SampleStreams streams;
  for (const auto& s : samples) streams[StreamKey{s.device, s.beacon}].push_back(s);
  for (auto& [key, stream] : streams) {
    std::stable_sort(stream.begin(), stream.end(),
                     [](const RssiSample& a, const RssiSample& b) { return a.timestamp < b.timestamp; });
  }
  return streams;
}

std::vector<double> kalman_filter(std::span<const double> stream, const KalmanParams& params) {
  if (stream.empty()) fail(ErrorCode::invalid_input, "Kalman filter needs at least one measurement");
  params.validate();

  std::vector<double> out;
  out.reserve(stream.size());
  double estimate = stream.front();
  double variance = params.initial_variance;
  out.push_back(estimate);
  for (std::size_t i = 1; i < stream.size(); ++i) {
    variance += params.process_variance;
    const double gain = variance / (variance + params.measurement_variance);
    estimate += gain * (stream[i] - estimate);
    variance *= (1.0 - gain);
    out.push_back(estimate);
  }
  return out;
}

double weighted_mean(std::span<const double> values, Weighting weighting) {
  if (values.empty()) fail(ErrorCode::invalid_input, "weighted mean of an empty sequence");
  double acc = 0.0;
  double total = 0.0;
  double lo = values.front(), hi = values.front();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = weighting == Weighting::recency ? static_cast<double>(i + 1) : 1.0;
    acc += w * values[i];
    total += w;
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  // Rounding can push the quotient an ulp past the extremes.
  return std::clamp(acc / total, lo, hi);
}

Fingerprint build_fingerprint(const SampleWindow& window, const FingerprintOwner& owner,
                              const FingerprintOptions& options) {
  window.validate();
  const auto* user = std::get_if<HashedUserId>(&owner);

  std::vector<RssiSample> selected;
  for (const auto& s : window.samples) {
    if (!user || s.device == *user) selected.push_back(s);
  }
  if (selected.empty()) fail(ErrorCode::empty_window, "no samples for fingerprint owner in window");

  // Survey windows may mix devices, so streams are keyed by beacon alone.
  std::stable_sort(selected.begin(), selected.end(),
                   [](const RssiSample& a, const RssiSample& b) { return a.timestamp < b.timestamp; });
  std::map<BeaconId, std::vector<double>> streams;
  for (const auto& s : selected) streams[s.beacon].push_back(s.rssi);

  std::map<BeaconId, double> entries;
  for (const auto& [beacon, rssi] : streams)
    entries[beacon] = weighted_mean(kalman_filter(rssi, options.kalman), options.weighting);
  return Fingerprint(std::move(entries), window.end, owner);
}

std::string reference_point_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rp-%03zu", index);
  return buf;
}

FingerprintMap build_fingerprint_map(std::span<const ReferenceWalk> walks, const Environment& env,
                                     const FingerprintOptions& options) {
  if (walks.empty()) fail(ErrorCode::invalid_input, "fingerprint map needs at least one reference walk");
  FingerprintMap map;
  map.environment_id = env.id;
  for (std::size_t i = 0; i < walks.size(); ++i) {
    const auto& walk = walks[i];
    const std::string where = "(" + text::format_real(walk.position.x) + ", " + text::format_real(walk.position.y) +
                              ", floor " + std::to_string(walk.position.floor) + ")";
    if (!env.bounds.contains(walk.position.xy()))
      fail(ErrorCode::invalid_input, "reference position " + where + " lies outside the environment");
    if (walk.window.samples.empty())
      fail(ErrorCode::empty_window, "reference walk at " + where + " has an empty window");
    ReferencePointId id(reference_point_name(i));
    map.points.push_back(ReferencePoint{id, walk.position, walk.area, build_fingerprint(walk.window, id, options)});
    map.created_at = std::max(map.created_at, walk.window.end);
  }
  map.validate();
  return map;
}

}  // namespace atlas::pipeline
