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

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include "atlas/kernels/rms.hpp"

namespace atlas::kernels::avx2 {

__attribute__((target("avx2"))) void accumulate_squared_diff(double value, std::span<const double> column,
                                                             std::span<const double> present,
                                                             std::span<double> sum, std::span<double> count) {
  const std::size_t n = column.size();
  const __m256d v = _mm256_set1_pd(value);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t p = 0;
  for (; p + 4 <= n; p += 4) {
    const __m256d ref = _mm256_loadu_pd(column.data() + p);
    const __m256d pres = _mm256_loadu_pd(present.data() + p);
    const __m256d mask = _mm256_cmp_pd(pres, zero, _CMP_NEQ_OQ);
    const __m256d d = _mm256_sub_pd(v, ref);
    // Masked lanes add +0.0, which leaves a non-negative sum unchanged.
    const __m256d sq = _mm256_and_pd(mask, _mm256_mul_pd(d, d));
    _mm256_storeu_pd(sum.data() + p, _mm256_add_pd(_mm256_loadu_pd(sum.data() + p), sq));
    const __m256d one = _mm256_and_pd(mask, _mm256_set1_pd(1.0));
    _mm256_storeu_pd(count.data() + p, _mm256_add_pd(_mm256_loadu_pd(count.data() + p), one));
  }
  for (; p < n; ++p) {
    if (present[p] == 0.0) continue;
    const double d = value - column[p];
    sum[p] += d * d;
    count[p] += 1.0;
  }
}

__attribute__((target("avx2"))) void finalize_rms(std::span<const double> sum, std::span<const double> count,
                                                  double min_count, std::span<double> distance) {
  const std::size_t n = sum.size();
  const __m256d threshold = _mm256_set1_pd(min_count);
  const __m256d inapplicable = _mm256_set1_pd(-1.0);
  std::size_t p = 0;
  for (; p + 4 <= n; p += 4) {
    const __m256d s = _mm256_loadu_pd(sum.data() + p);
    const __m256d c = _mm256_loadu_pd(count.data() + p);
    const __m256d ok = _mm256_cmp_pd(c, threshold, _CMP_GE_OQ);
    // Lanes with count 0 divide to NaN here and are blended away.
    const __m256d rms = _mm256_sqrt_pd(_mm256_div_pd(s, c));
    _mm256_storeu_pd(distance.data() + p, _mm256_blendv_pd(inapplicable, rms, ok));
  }
  for (; p < n; ++p) distance[p] = count[p] >= min_count ? __builtin_sqrt(sum[p] / count[p]) : -1.0;
}

}  // namespace atlas::kernels::avx2

#endif
