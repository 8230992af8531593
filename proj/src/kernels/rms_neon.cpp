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

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "atlas/kernels/rms.hpp"

namespace atlas::kernels::neon {

void accumulate_squared_diff(double value, std::span<const double> column, std::span<const double> present,
                             std::span<double> sum, std::span<double> count) {
  const std::size_t n = column.size();
  const float64x2_t v = vdupq_n_f64(value);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t p = 0;
  for (; p + 2 <= n; p += 2) {
    const float64x2_t ref = vld1q_f64(column.data() + p);
    const uint64x2_t mask =
        vreinterpretq_u64_u32(vmvnq_u32(vreinterpretq_u32_u64(vceqq_f64(vld1q_f64(present.data() + p), zero))));
    const float64x2_t d = vsubq_f64(v, ref);
    const float64x2_t sq = vbslq_f64(mask, vmulq_f64(d, d), zero);
    vst1q_f64(sum.data() + p, vaddq_f64(vld1q_f64(sum.data() + p), sq));
    vst1q_f64(count.data() + p, vaddq_f64(vld1q_f64(count.data() + p), vbslq_f64(mask, one, zero)));
  }
  for (; p < n; ++p) {
    if (present[p] == 0.0) continue;
    const double d = value - column[p];
    sum[p] += d * d;
    count[p] += 1.0;
  }
}

void finalize_rms(std::span<const double> sum, std::span<const double> count, double min_count,
                  std::span<double> distance) {
  const std::size_t n = sum.size();
  const float64x2_t threshold = vdupq_n_f64(min_count);
  const float64x2_t inapplicable = vdupq_n_f64(-1.0);
  std::size_t p = 0;
  for (; p + 2 <= n; p += 2) {
    const float64x2_t s = vld1q_f64(sum.data() + p);
    const float64x2_t c = vld1q_f64(count.data() + p);
    const uint64x2_t ok = vcgeq_f64(c, threshold);
    const float64x2_t rms = vsqrtq_f64(vdivq_f64(s, c));
    vst1q_f64(distance.data() + p, vbslq_f64(ok, rms, inapplicable));
  }
  for (; p < n; ++p) distance[p] = count[p] >= min_count ? std::sqrt(sum[p] / count[p]) : -1.0;
}

}  // namespace atlas::kernels::neon

#endif
