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

// Data-parallel inner loops of fingerprint matching.
//
// Reference fingerprints are laid out column-major: one contiguous column of
// RSSI values per beacon, one lane per reference point, plus a 0/1 presence
// column. Every ISA variant performs the same IEEE operations in the same
// order per lane, so results are bit-identical to the scalar reference.

#include <optional>
#include <span>
#include <string_view>

namespace atlas::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

/// Best variant supported by the running CPU.
Isa detected_isa();
/// Variant used by the dispatching entry points below.
Isa active_isa();
/// Pins dispatch to `isa` (or restores auto-detection with nullopt).
/// Requesting an unsupported variant falls back to scalar.
void force_isa(std::optional<Isa> isa);

// Per lane p with present[p] != 0:
//   sum[p] += (value - column[p])^2;  count[p] += 1
void accumulate_squared_diff(double value, std::span<const double> column, std::span<const double> present,
                             std::span<double> sum, std::span<double> count);

// distance[p] = sqrt(sum[p] / count[p]) when count[p] >= min_count, else -1.
void finalize_rms(std::span<const double> sum, std::span<const double> count, double min_count,
                  std::span<double> distance);

namespace scalar {
void accumulate_squared_diff(double value, std::span<const double> column, std::span<const double> present,
                             std::span<double> sum, std::span<double> count);
void finalize_rms(std::span<const double> sum, std::span<const double> count, double min_count,
                  std::span<double> distance);
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
namespace avx2 {
void accumulate_squared_diff(double value, std::span<const double> column, std::span<const double> present,
                             std::span<double> sum, std::span<double> count);
void finalize_rms(std::span<const double> sum, std::span<const double> count, double min_count,
                  std::span<double> distance);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void accumulate_squared_diff(double value, std::span<const double> column, std::span<const double> present,
                             std::span<double> sum, std::span<double> count);
void finalize_rms(std::span<const double> sum, std::span<const double> count, double min_count,
                  std::span<double> distance);
}  // namespace neon
#endif

}  // namespace atlas::kernels
