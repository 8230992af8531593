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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "atlas/core/ids.hpp"

namespace atlas {

using TimestampMs = std::int64_t;

inline constexpr double kMinRssi = -110.0;
inline constexpr double kMaxRssi = 0.0;

bool rssi_in_range(double rssi) noexcept;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
  int floor = 0;

  bool operator==(const Position&) const = default;
  Point2 xy() const { return {x, y}; }
};

struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(Point2 p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  double area() const { return (max_x - min_x) * (max_y - min_y); }
  bool operator==(const Rect&) const = default;
};

struct RssiSample {
  BeaconId beacon;
  HashedUserId device;
  double rssi = 0.0;
  TimestampMs timestamp = 0;

  /// Validating constructor: rssi within [-110, 0] dBm and timestamp > 0.
  static RssiSample make(BeaconId beacon, HashedUserId device, double rssi, TimestampMs timestamp);

  bool operator==(const RssiSample&) const = default;
};

using FingerprintOwner = std::variant<HashedUserId, ReferencePointId>;

/// Per-beacon RSSI vector. Entries are keyed (and iterated) in BeaconId order.
class Fingerprint {
 public:
  using Entries = std::map<BeaconId, double>;

  /// Rejects empty input, duplicate beacons and out-of-range RSSI values.
  Fingerprint(const std::vector<std::pair<BeaconId, double>>& entries, TimestampMs timestamp,
              FingerprintOwner owner);
  Fingerprint(Entries entries, TimestampMs timestamp, FingerprintOwner owner);

  const Entries& entries() const { return entries_; }
  TimestampMs timestamp() const { return timestamp_; }
  const FingerprintOwner& owner() const { return owner_; }
  std::size_t size() const { return entries_.size(); }
  std::optional<double> rssi(const BeaconId& beacon) const;

  bool operator==(const Fingerprint&) const = default;

 private:
  void validate() const;

  Entries entries_;
  TimestampMs timestamp_ = 0;
  FingerprintOwner owner_;
};

struct ReferencePoint {
  ReferencePointId id;
  Position position;
  std::string area;
  Fingerprint fingerprint;

  bool operator==(const ReferencePoint&) const = default;
};

struct FingerprintMap {
  std::vector<ReferencePoint> points;
  std::string environment_id;
  TimestampMs created_at = 0;

  /// Throws Error(validation_error) on duplicate reference point ids.
  void validate() const;
  const ReferencePoint* find(const ReferencePointId& id) const;
  bool operator==(const FingerprintMap&) const = default;
};

struct Area {
  std::string label;
  int floor = 0;
  // Simple polygon, counter-clockwise or clockwise. Rectangles are stored as
  // four vertices.
  std::vector<Point2> polygon;

  static Area rectangle(std::string label, int floor, Rect r);
  /// Boundary points count as inside.
  bool contains(Position p) const;
  Rect bounding_box() const;
  Point2 centroid() const;
  double surface() const;

  bool operator==(const Area&) const = default;
};

struct Wall {
  Point2 from;
  Point2 to;
  int floor = 0;
  double attenuation_db = 0.0;

  bool operator==(const Wall&) const = default;
};

struct BeaconPlacement {
  BeaconId id;
  Position position;

  bool operator==(const BeaconPlacement&) const = default;
};

struct Environment {
  std::string id;
  Rect bounds;
  std::vector<Area> areas;
  std::vector<Wall> walls;
  std::vector<BeaconPlacement> beacons;
  double floor_height_m = 3.0;
  double floor_attenuation_db = 20.0;

  /// Checks areas and beacons lie inside the bounds, attenuations are
  /// non-negative and beacon ids are unique.
  void validate() const;
  const BeaconPlacement* find_beacon(const BeaconId& id) const;
  /// First declared area containing `p`, if any.
  const Area* area_at(Position p) const;
  std::vector<int> floors() const;

  bool operator==(const Environment&) const = default;
};

struct LocationRecord {
  HashedUserId user;
  std::string area;
  ReferencePointId reference_point;
  double confidence = 0.0;
  TimestampMs timestamp = 0;

  bool operator==(const LocationRecord&) const = default;
};

}  // namespace atlas
