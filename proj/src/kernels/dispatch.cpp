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

#include <atomic>

#include "atlas/kernels/rms.hpp"

namespace atlas::kernels {
namespace {

constexpr int kAuto = -1;
std::atomic<int> g_forced{kAuto};

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

Isa detected_isa() {
  static const Isa best = [] {
    if (supported(Isa::avx2)) return Isa::avx2;
    if (supported(Isa::neon)) return Isa::neon;
    return Isa::scalar;
  }();
  return best;
}

Isa active_isa() {
  int forced = g_forced.load(std::memory_order_relaxed);
  return forced == kAuto ? detected_isa() : static_cast<Isa>(forced);
}

void force_isa(std::optional<Isa> isa) {
  if (!isa) {
    g_forced.store(kAuto);
    return;
  }
  g_forced.store(static_cast<int>(supported(*isa) ? *isa : Isa::scalar));
}

void accumulate_squared_diff(double value, std::span<const double> column, std::span<const double> present,
                             std::span<double> sum, std::span<double> count) {
  switch (active_isa()) {
#if defined(__x86_64__) || defined(__i386__)
    case Isa::avx2:
      return avx2::accumulate_squared_diff(value, column, present, sum, count);
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return neon::accumulate_squared_diff(value, column, present, sum, count);
#endif
    default:
      return scalar::accumulate_squared_diff(value, column, present, sum, count);
  }
}

void finalize_rms(std::span<const double> sum, std::span<const double> count, double min_count,
                  std::span<double> distance) {
  switch (active_isa()) {
#if defined(__x86_64__) || defined(__i386__)
    case Isa::avx2:
      return avx2::finalize_rms(sum, count, min_count, distance);
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return neon::finalize_rms(sum, count, min_count, distance);
#endif
    default:
      return scalar::finalize_rms(sum, count, min_count, distance);
  }
}

}  // namespace atlas::kernels
