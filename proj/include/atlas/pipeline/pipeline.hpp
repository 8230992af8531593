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

// Raw samples -> smoothed per-beacon fingerprints -> fingerprint map.

#include <map>
#include <span>
#include <vector>

#include "atlas/core/types.hpp"

namespace atlas::pipeline {

struct KalmanParams {
  double process_variance = 0.008;     // Q, dB^2
  double measurement_variance = 4.0;   // R, dB^2
  double initial_variance = 1.0;       // P0, dB^2

  void validate() const;
};

enum class Weighting {
  recency,  // i-th of n filtered values weighs i / sum(1..n)
  uniform,
};

struct SampleWindow {
  std::vector<RssiSample> samples;
  TimestampMs start = 0;  // inclusive
  TimestampMs end = 0;    // exclusive

  /// Throws Error(invalid_input) when a sample falls outside [start, end).
  void validate() const;
};

struct StreamKey {
  HashedUserId device;
  BeaconId beacon;

  auto operator<=>(const StreamKey&) const = default;
};

using SampleStreams = std::map<StreamKey, std::vector<RssiSample>>;

/// Groups by (device, beacon); each stream ascending by timestamp, stable
/// for equal timestamps.
SampleStreams sort_and_group(std::span<const RssiSample> samples);

/// Scalar Kalman smoother. The first estimate is the first measurement
/// (variance P0); each later measurement runs predict + update.
std::vector<double> kalman_filter(std::span<const double> stream, const KalmanParams& params);

/// Weighted mean of already-filtered values, clamped into [min, max].
double weighted_mean(std::span<const double> values, Weighting weighting);

struct FingerprintOptions {
  KalmanParams kalman;
  Weighting weighting = Weighting::recency;
};

/// A HashedUserId owner selects that device's samples; a ReferencePointId
/// owner consumes every sample in the window (a survey dwell). The
/// fingerprint is stamped with the window end.
Fingerprint build_fingerprint(const SampleWindow& window, const FingerprintOwner& owner,
                              const FingerprintOptions& options = {});

struct ReferenceWalk {
  Position position;
  std::string area;
  SampleWindow window;
};

std::string reference_point_name(std::size_t index);

FingerprintMap build_fingerprint_map(std::span<const ReferenceWalk> walks, const Environment& env,
                                     const FingerprintOptions& options = {});

}  // namespace atlas::pipeline
