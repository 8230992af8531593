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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "atlas/core/error.hpp"
#include "atlas/pipeline/pipeline.hpp"
#include "fixtures.hpp"

using namespace atlas;
using namespace atlas::pipeline;
using atlas::testing::beacon;
using atlas::testing::user;

namespace {

double variance(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size());
}

RssiSample sample(std::uint64_t b, int u, double rssi, TimestampMs t) {
  return RssiSample::make(beacon(b), user(u), rssi, t);
}

}  // namespace

TEST(KalmanTest, MatchesHandComputedSequence) {
  const std::vector<double> in{-60, -50, -70};
  const auto out = kalman_filter(in, {});
  ASSERT_EQ(out.size(), 3u);
  EXPECT_DOUBLE_EQ(out[0], -60.0);
  EXPECT_NEAR(out[1], -57.98722044728434, 1e-12);
  EXPECT_NEAR(out[2], -60.016621263534645, 1e-12);
}

TEST(KalmanTest, ConstantStreamIsExactFixedPoint) {
  for (double c : {-110.0, -73.4, -40.0, 0.0}) {
    const std::vector<double> in(500, c);
    for (double v : kalman_filter(in, {})) ASSERT_EQ(v, c);
  }
}

TEST(KalmanTest, ShiftEquivariant) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(-70, 5);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> in(40);
    for (auto& x : in) x = noise(rng);
    const double shift = static_cast<double>(rep) - 25.0;
    std::vector<double> shifted(in);
    for (auto& x : shifted) x += shift;
    const auto a = kalman_filter(in, {});
    const auto b = kalman_filter(shifted, {});
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(b[i], a[i] + shift, 1e-9);
  }
}

TEST(KalmanTest, ReducesVarianceOfNoisyStreams) {
  int reduced = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(-70, 2);
    std::vector<double> in(100);
    for (auto& x : in) x = noise(rng);
    if (variance(kalman_filter(in, {})) < variance(in)) ++reduced;
  }
  EXPECT_GE(reduced, 99);
}

TEST(KalmanTest, RejectsEmptyAndNonPositiveVariances) {
  EXPECT_THROW(kalman_filter(std::vector<double>{}, {}), Error);
  KalmanParams bad;
  bad.measurement_variance = 0;
  EXPECT_THROW(kalman_filter(std::vector<double>{-50}, bad), Error);
}

TEST(WeightedMeanTest, RecencyWeights) {
  EXPECT_DOUBLE_EQ(weighted_mean(std::vector<double>{-60, -50}, Weighting::recency), -53.333333333333336);
  EXPECT_DOUBLE_EQ(weighted_mean(std::vector<double>{-60, -50}, Weighting::uniform), -55.0);
  EXPECT_DOUBLE_EQ(weighted_mean(std::vector<double>{-42.5}, Weighting::recency), -42.5);
}

TEST(WeightedMeanTest, StaysWithinInputRange) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(-110, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> v(1 + rng() % 20);
    for (auto& x : v) x = dist(rng);
    const double m = weighted_mean(v, Weighting::recency);
    ASSERT_GE(m, *std::min_element(v.begin(), v.end()));
    ASSERT_LE(m, *std::max_element(v.begin(), v.end()));
  }
}

TEST(GroupingTest, StableSortWithinStreams) {
  std::vector<RssiSample> in{sample(2, 1, -60, 30), sample(1, 1, -50, 20), sample(1, 1, -51, 10),
                             sample(1, 1, -52, 20), sample(1, 2, -70, 5)};
  auto streams = sort_and_group(in);
  ASSERT_EQ(streams.size(), 3u);
  const auto& s = streams.at(StreamKey{user(1), beacon(1)});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].rssi, -51);
  EXPECT_EQ(s[1].rssi, -50);
  EXPECT_EQ(s[2].rssi, -52);
}

TEST(FingerprintBuildTest, SelectsOwnerAndStampsWindowEnd) {
  SampleWindow w{{sample(1, 1, -60, 1000), sample(1, 1, -50, 2000), sample(2, 1, -80, 1500), sample(1, 2, -40, 1000)},
                 1000, 15000};
  auto fp = build_fingerprint(w, user(1));
  EXPECT_EQ(fp.timestamp(), 15000);
  ASSERT_EQ(fp.size(), 2u);
  const double expected = weighted_mean(kalman_filter(std::vector<double>{-60, -50}, {}), Weighting::recency);
  EXPECT_DOUBLE_EQ(*fp.rssi(beacon(1)), expected);
  EXPECT_DOUBLE_EQ(*fp.rssi(beacon(2)), -80.0);
}

TEST(FingerprintBuildTest, OrderOfArrivalDoesNotMatter) {
  std::vector<RssiSample> s{sample(1, 1, -60, 1000), sample(1, 1, -50, 2000), sample(1, 1, -65, 3000)};
  SampleWindow a{s, 0, 5000};
  std::reverse(s.begin(), s.end());
  SampleWindow b{s, 0, 5000};
  EXPECT_EQ(build_fingerprint(a, user(1)), build_fingerprint(b, user(1)));
}

TEST(FingerprintBuildTest, EmptyWindowAndOutsideSamples) {
  SampleWindow none{{sample(1, 2, -60, 1000)}, 0, 5000};
  try {
    build_fingerprint(none, user(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_window);
  }
  SampleWindow outside{{sample(1, 1, -60, 5000)}, 0, 5000};
  try {
    build_fingerprint(outside, user(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_input);
  }
}

TEST(FingerprintMapBuildTest, OnePointPerWalkWithStableIds) {
  auto env = atlas::testing::two_rooms();
  std::vector<ReferenceWalk> walks{
      {{2, 2, 0}, "west", {{sample(1, 0, -50, 100), sample(3, 0, -80, 100)}, 100, 5100}},
      {{8, 2, 0}, "east", {{sample(1, 0, -80, 5100), sample(3, 0, -50, 5100)}, 5100, 10100}},
  };
  auto map = build_fingerprint_map(walks, env);
  ASSERT_EQ(map.points.size(), 2u);
  EXPECT_EQ(map.points[0].id.str(), "rp-000");
  EXPECT_EQ(map.points[1].id.str(), "rp-001");
  EXPECT_EQ(map.points[1].area, "east");
  EXPECT_EQ(map.environment_id, "two-rooms");
  EXPECT_EQ(map.created_at, 10100);
  EXPECT_EQ(std::get<ReferencePointId>(map.points[0].fingerprint.owner()), map.points[0].id);
  EXPECT_EQ(build_fingerprint_map(walks, env), map);
}

TEST(FingerprintMapBuildTest, RejectsEmptyWalkAndOutsidePosition) {
  auto env = atlas::testing::two_rooms();
  std::vector<ReferenceWalk> empty_walk{{{2, 2, 0}, "west", {{}, 0, 5000}}};
  EXPECT_THROW(build_fingerprint_map(empty_walk, env), Error);
  std::vector<ReferenceWalk> outside{{{20, 2, 0}, "west", {{sample(1, 0, -50, 100)}, 0, 5000}}};
  EXPECT_THROW(build_fingerprint_map(outside, env), Error);
  EXPECT_THROW(build_fingerprint_map(std::vector<ReferenceWalk>{}, env), Error);
}
