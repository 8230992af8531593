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

// Deterministic discrete-event model of beacons serving paired devices.
//
// Every beacon opens a cycle each cycle_period_ms. Connected devices are
// served in batches of up to max_parallel; a batch holds its connections for
// round_trip_ms and batches run back-to-back, so one cycle serves at most
// floor(period / round_trip) * max_parallel devices. The rest are deferred
// and go first next cycle.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "atlas/core/types.hpp"
#include "atlas/sim/path_loss.hpp"

namespace atlas::sim {

struct CycleConfig {
  TimestampMs cycle_period_ms = 15000;
  TimestampMs round_trip_ms = 3000;
  std::size_t max_parallel_per_beacon = 8;

  void validate() const;
  std::size_t batches_per_cycle() const;
  std::size_t capacity_per_cycle() const;
};

struct Waypoint {
  TimestampMs t = 0;
  Position position;
};

struct SimDevice {
  std::string raw_id;
  std::vector<Waypoint> waypoints;
  bool paired = false;

  void validate() const;
  /// Linear interpolation between bracketing waypoints, clamped at the ends.
  /// Across floors there is no interpolation: the device stays at the
  /// earlier waypoint until the later one's timestamp.
  Position position_at(TimestampMs t) const;
};

using DeviceIndex = std::size_t;

struct Batch {
  TimestampMs start = 0;
  TimestampMs end = 0;
  std::vector<DeviceIndex> devices;
};

struct CycleSchedule {
  std::vector<Batch> batches;
  std::vector<DeviceIndex> deferred;

  std::size_t served() const;
};

/// `queue` is the service order for this cycle (previously deferred first).
CycleSchedule schedule_cycle(std::span<const DeviceIndex> queue, TimestampMs cycle_start, const CycleConfig& config);

enum class TraceKind { advertisement, connection, measurement, deferral };

struct TraceEvent {
  TimestampMs time = 0;
  TraceKind kind = TraceKind::advertisement;
  std::size_t beacon = 0;      // index into the environment's beacons
  DeviceIndex device = 0;      // unused for advertisements
  double rssi = 0.0;           // measurements only

  bool operator==(const TraceEvent&) const = default;
};

std::string to_string(const TraceEvent& event);
std::string format_trace(std::span<const TraceEvent> trace);

/// Event queue ordered by (time, batch ends first, insertion sequence).
class SimClock {
 public:
  enum class EventType { cycle_start, batch_start, batch_end };

  struct Event {
    TimestampMs time = 0;
    std::uint64_t seq = 0;
    EventType type = EventType::cycle_start;
    std::size_t beacon = 0;
    std::uint64_t batch = 0;
  };

  explicit SimClock(TimestampMs start) : now_(start) {}

  TimestampMs now() const { return now_; }
  void schedule(TimestampMs time, EventType type, std::size_t beacon, std::uint64_t batch = 0);
  /// Pops the earliest event with time < until, advancing now.
  std::optional<Event> pop_before(TimestampMs until);
  void advance_to(TimestampMs t);
  bool empty() const { return queue_.empty(); }

 private:
  // At equal times a batch ends before the next one starts, so connections
  // handed over back-to-back never count as open together.
  static int rank(EventType t) { return t == EventType::batch_end ? 0 : 1; }
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (rank(a.type) != rank(b.type)) return rank(a.type) > rank(b.type);
      return a.seq > b.seq;
    }
  };

  TimestampMs now_;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

struct WorldConfig {
  PathLossParams path_loss;
  CycleConfig cycle;
  std::uint64_t seed = 1;
  TimestampMs start_ms = 1'700'000'000'000;
  std::vector<std::uint8_t> salt = std::vector<std::uint8_t>(16, 0);
};

class World {
 public:
  World(Environment env, std::vector<SimDevice> devices, WorldConfig config);

  /// Processes every event with time < until_ms, then sets now = until_ms.
  std::vector<TraceEvent> step(TimestampMs until_ms);

  TimestampMs now() const { return clock_.now(); }
  const Environment& environment() const { return env_; }
  const std::vector<SimDevice>& devices() const { return devices_; }
  const HashedUserId& hashed_id(DeviceIndex d) const { return hashed_[d]; }
  const WorldConfig& config() const { return config_; }

  /// Samples a beacon has measured since the last drain, in event order.
  std::vector<RssiSample> drain_outbound(std::size_t beacon);
  std::vector<RssiSample> drain_all_outbound();

  /// Highest number of simultaneously open connections seen on any beacon.
  std::size_t peak_connections() const { return peak_connections_; }
  /// Batches a device was part of that overlapped in time (must stay 0).
  std::size_t overlapping_services() const { return overlapping_services_; }

 private:
  struct BeaconState {
    std::deque<DeviceIndex> deferred;
    std::map<std::uint64_t, Batch> pending;  // keyed by batch serial
    std::vector<RssiSample> outbound;
    std::vector<TimestampMs> busy_until;  // per device
    std::size_t open_connections = 0;
  };

  void on_cycle_start(std::size_t beacon, std::vector<TraceEvent>& trace);
  void on_batch_start(std::size_t beacon, std::uint64_t batch, std::vector<TraceEvent>& trace);
  void on_batch_end(std::size_t beacon, std::uint64_t batch);

  Environment env_;
  std::vector<SimDevice> devices_;
  std::vector<HashedUserId> hashed_;
  WorldConfig config_;
  SimClock clock_;
  Rng rng_;
  std::vector<BeaconState> beacons_;
  std::uint64_t next_batch_ = 0;
  std::size_t peak_connections_ = 0;
  std::size_t overlapping_services_ = 0;
};

}  // namespace atlas::sim
