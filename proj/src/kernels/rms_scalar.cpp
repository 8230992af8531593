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

#include <cmath>

#include "atlas/kernels/rms.hpp"

namespace atlas::kernels::scalar {

void accumulate_squared_diff(double value, std::span<const double> column, std::span<const double> present,
                             std::span<double> sum, std::span<double> count) {
  const std::size_t n = column.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (present[p] == 0.0) continue;
    const double d = value - column[p];
    sum[p] += d * d;
    count[p] += 1.0;
  }
}

void finalize_rms(std::span<const double> sum, std::span<const double> count, double min_count,
                  std::span<double> distance) {
  const std::size_t n = sum.size();
  for (std::size_t p = 0; p < n; ++p)
    distance[p] = count[p] >= min_count ? std::sqrt(sum[p] / count[p]) : -1.0;
}

}  // namespace atlas::kernels::scalar
