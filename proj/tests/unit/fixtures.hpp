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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "atlas/core/hash.hpp"
#include "atlas/core/types.hpp"

namespace atlas::testing {

using Entries = std::vector<std::pair<BeaconId, double>>;

inline const std::vector<std::uint8_t>& test_salt() {
  static const std::vector<std::uint8_t> salt(16, 0x5a);
  return salt;
}

inline HashedUserId user(int n) { return hash_user_id("device-" + std::to_string(n), test_salt()); }

inline BeaconId beacon(std::uint64_t n) { return BeaconId::from_index(n); }

// 10 x 5 m, rooms "west" and "east" split by a 6 dB wall at x = 5, one
// beacon near each corner.
inline Environment two_rooms() {
  Environment env;
  env.id = "two-rooms";
  env.bounds = {0, 0, 10, 5};
  env.areas = {Area::rectangle("west", 0, {0, 0, 5, 5}), Area::rectangle("east", 0, {5, 0, 10, 5})};
  env.walls = {Wall{{5, 0}, {5, 5}, 0, 6.0}};
  env.beacons = {
      {beacon(1), {1, 1, 0}},
      {beacon(2), {1, 4, 0}},
      {beacon(3), {9, 1, 0}},
      {beacon(4), {9, 4, 0}},
  };
  return env;
}

inline Fingerprint user_fp(int n, std::vector<std::pair<BeaconId, double>> entries, TimestampMs t = 1000) {
  return Fingerprint(entries, t, user(n));
}

inline LocationRecord record(int u, std::string area, TimestampMs t, double confidence = 0.5) {
  return LocationRecord{user(u), std::move(area), ReferencePointId("rp-" + std::to_string(t % 7)), confidence, t};
}

}  // namespace atlas::testing
