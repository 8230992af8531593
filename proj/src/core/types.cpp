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

#include "atlas/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "atlas/core/error.hpp"

namespace atlas {
namespace {

constexpr double kGeomEps = 1e-9;

bool on_segment(Point2 p, Point2 a, Point2 b) {
  double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  double len = std::hypot(b.x - a.x, b.y - a.y);
  if (std::abs(cross) > kGeomEps * std::max(1.0, len)) return false;
  return p.x >= std::min(a.x, b.x) - kGeomEps && p.x <= std::max(a.x, b.x) + kGeomEps &&
         p.y >= std::min(a.y, b.y) - kGeomEps && p.y <= std::max(a.y, b.y) + kGeomEps;
}

}  // namespace

bool rssi_in_range(double rssi) noexcept { return rssi >= kMinRssi && rssi <= kMaxRssi; }

RssiSample RssiSample::make(BeaconId beacon, HashedUserId device, double rssi, TimestampMs timestamp) {
  if (!rssi_in_range(rssi)) fail(ErrorCode::invalid_input, "rssi outside [-110, 0] dBm");
  if (timestamp <= 0) fail(ErrorCode::invalid_input, "sample timestamp must be positive");
  return RssiSample{beacon, device, rssi, timestamp};
}

Fingerprint::Fingerprint(const std::vector<std::pair<BeaconId, double>>& entries, TimestampMs timestamp,
                         FingerprintOwner owner)
    : timestamp_(timestamp), owner_(std::move(owner)) {
  for (const auto& [beacon, rssi] : entries) {
    if (!entries_.emplace(beacon, rssi).second)
      fail(ErrorCode::invalid_input, "duplicate beacon " + beacon.to_string() + " in fingerprint");
  }
  validate();
}

Fingerprint::Fingerprint(Entries entries, TimestampMs timestamp, FingerprintOwner owner)
    : entries_(std::move(entries)), timestamp_(timestamp), owner_(std::move(owner)) {
  validate();
}

void Fingerprint::validate() const {
  if (entries_.empty()) fail(ErrorCode::invalid_input, "fingerprint needs at least one entry");
  for (const auto& [beacon, rssi] : entries_) {
    if (!rssi_in_range(rssi))
      fail(ErrorCode::invalid_input, "fingerprint rssi out of range for beacon " + beacon.to_string());
  }
}

std::optional<double> Fingerprint::rssi(const BeaconId& beacon) const {
  auto it = entries_.find(beacon);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void FingerprintMap::validate() const {
  std::set<ReferencePointId> seen;
  for (const auto& p : points) {
    if (!seen.insert(p.id).second)
      fail(ErrorCode::validation_error, "duplicate reference point id '" + p.id.str() + "'");
  }
}

const ReferencePoint* FingerprintMap::find(const ReferencePointId& id) const {
  for (const auto& p : points)
    if (p.id == id) return &p;
  return nullptr;
}

Area Area::rectangle(std::string label, int floor, Rect r) {
  return Area{std::move(label), floor,
              {{r.min_x, r.min_y}, {r.max_x, r.min_y}, {r.max_x, r.max_y}, {r.min_x, r.max_y}}};
}

bool Area::contains(Position p) const {
  if (p.floor != floor || polygon.size() < 3) return false;
  const Point2 q = p.xy();
  bool inside = false;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    const Point2& a = polygon[i];
    const Point2& b = polygon[j];
    if (on_segment(q, a, b)) return true;
    if ((a.y > q.y) != (b.y > q.y)) {
      double x_cross = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (q.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

Rect Area::bounding_box() const {
  Rect r{polygon.front().x, polygon.front().y, polygon.front().x, polygon.front().y};
  for (const auto& p : polygon) {
    r.min_x = std::min(r.min_x, p.x);
    r.min_y = std::min(r.min_y, p.y);
    r.max_x = std::max(r.max_x, p.x);
    r.max_y = std::max(r.max_y, p.y);
  }
  return r;
}

double Area::surface() const {
  double twice = 0.0;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++)
    twice += polygon[j].x * polygon[i].y - polygon[i].x * polygon[j].y;
  return std::abs(twice) / 2.0;
}

Point2 Area::centroid() const {
  double twice = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    double cross = polygon[j].x * polygon[i].y - polygon[i].x * polygon[j].y;
    twice += cross;
    cx += (polygon[j].x + polygon[i].x) * cross;
    cy += (polygon[j].y + polygon[i].y) * cross;
  }
  if (std::abs(twice) < kGeomEps) return polygon.front();
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

void Environment::validate() const {
  if (bounds.max_x <= bounds.min_x || bounds.max_y <= bounds.min_y)
    fail(ErrorCode::validation_error, "environment '" + id + "' has empty bounds");
  for (const auto& a : areas) {
    if (a.polygon.size() < 3) fail(ErrorCode::validation_error, "area '" + a.label + "' needs >= 3 vertices");
    for (const auto& v : a.polygon) {
      if (!bounds.contains(v)) fail(ErrorCode::validation_error, "area '" + a.label + "' extends outside bounds");
    }
  }
  for (const auto& w : walls) {
    if (w.attenuation_db < 0.0) fail(ErrorCode::validation_error, "wall attenuation must be >= 0");
  }
  if (floor_attenuation_db < 0.0 || floor_height_m <= 0.0)
    fail(ErrorCode::validation_error, "floor height must be > 0 and floor attenuation >= 0");
  std::set<BeaconId> ids;
  for (const auto& b : beacons) {
    if (!bounds.contains(b.position.xy()))
      fail(ErrorCode::validation_error, "beacon " + b.id.to_string() + " lies outside bounds");
    if (!ids.insert(b.id).second) fail(ErrorCode::validation_error, "duplicate beacon " + b.id.to_string());
  }
}

const BeaconPlacement* Environment::find_beacon(const BeaconId& beacon) const {
  for (const auto& b : beacons)
    if (b.id == beacon) return &b;
  return nullptr;
}

const Area* Environment::area_at(Position p) const {
  for (const auto& a : areas)
    if (a.contains(p)) return &a;
  return nullptr;
}

std::vector<int> Environment::floors() const {
  std::set<int> fs;
  for (const auto& a : areas) fs.insert(a.floor);
  return {fs.begin(), fs.end()};
}

}  // namespace atlas
