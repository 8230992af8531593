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

#include "atlas/sim/world.hpp"

#include <algorithm>
#include <cstdio>

#include "atlas/core/error.hpp"
#include "atlas/core/hash.hpp"

namespace atlas::sim {

void CycleConfig::validate() const {
  if (round_trip_ms <= 0 || cycle_period_ms < round_trip_ms)
    fail(ErrorCode::validation_error, "cycle period must be >= round trip > 0");
  if (max_parallel_per_beacon == 0) fail(ErrorCode::validation_error, "max_parallel_per_beacon must be > 0");
}

std::size_t CycleConfig::batches_per_cycle() const {
  return static_cast<std::size_t>(cycle_period_ms / round_trip_ms);
}

std::size_t CycleConfig::capacity_per_cycle() const { return batches_per_cycle() * max_parallel_per_beacon; }

void SimDevice::validate() const {
  if (waypoints.empty()) fail(ErrorCode::validation_error, "device '" + raw_id + "' has no waypoints");
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (waypoints[i].t <= waypoints[i - 1].t)
      fail(ErrorCode::validation_error, "device '" + raw_id + "' waypoint times must strictly increase");
  }
}

Position SimDevice::position_at(TimestampMs t) const {
  if (t <= waypoints.front().t) return waypoints.front().position;
  if (t >= waypoints.back().t) return waypoints.back().position;
  auto next = std::upper_bound(waypoints.begin(), waypoints.end(), t,
                               [](TimestampMs v, const Waypoint& w) { return v < w.t; });
  const Waypoint& b = *next;
  const Waypoint& a = *(next - 1);
  if (a.position.floor != b.position.floor) return a.position;
  const double f = static_cast<double>(t - a.t) / static_cast<double>(b.t - a.t);
  return Position{a.position.x + f * (b.position.x - a.position.x), a.position.y + f * (b.position.y - a.position.y),
                  a.position.floor};
}

std::size_t CycleSchedule::served() const {
  std::size_t n = 0;
  for (const auto& b : batches) n += b.devices.size();
  return n;
}

CycleSchedule schedule_cycle(std::span<const DeviceIndex> queue, TimestampMs cycle_start, const CycleConfig& config) {
  config.validate();
  CycleSchedule out;
  const std::size_t capacity = config.capacity_per_cycle();
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (i >= capacity) {
      out.deferred.push_back(queue[i]);
      continue;
    }
    const std::size_t b = i / config.max_parallel_per_beacon;
    if (b == out.batches.size()) {
      const TimestampMs start = cycle_start + static_cast<TimestampMs>(b) * config.round_trip_ms;
      out.batches.push_back(Batch{start, start + config.round_trip_ms, {}});
    }
    out.batches[b].devices.push_back(queue[i]);
  }
  return out;
}

std::string to_string(const TraceEvent& e) {
  static constexpr const char* kNames[] = {"advertisement", "connection", "measurement", "deferral"};
  char buf[160];
  if (e.kind == TraceKind::advertisement)
    std::snprintf(buf, sizeof buf, "%lld %s beacon=%zu", static_cast<long long>(e.time),
                  kNames[static_cast<int>(e.kind)], e.beacon);
  else if (e.kind == TraceKind::measurement)
    std::snprintf(buf, sizeof buf, "%lld %s beacon=%zu device=%zu rssi=%.17g", static_cast<long long>(e.time),
                  kNames[static_cast<int>(e.kind)], e.beacon, e.device, e.rssi);
  else
    std::snprintf(buf, sizeof buf, "%lld %s beacon=%zu device=%zu", static_cast<long long>(e.time),
                  kNames[static_cast<int>(e.kind)], e.beacon, e.device);
  return buf;
}

std::string format_trace(std::span<const TraceEvent> trace) {
  std::string out;
  for (const auto& e : trace) {
    out += to_string(e);
    out += '\n';
  }
  return out;
}

void SimClock::schedule(TimestampMs time, EventType type, std::size_t beacon, std::uint64_t batch) {
  if (time < now_) fail(ErrorCode::invalid_input, "cannot schedule an event in the past");
  queue_.push(Event{time, next_seq_++, type, beacon, batch});
}

std::optional<SimClock::Event> SimClock::pop_before(TimestampMs until) {
  if (queue_.empty() || queue_.top().time >= until) return std::nullopt;
  Event e = queue_.top();
  queue_.pop();
  now_ = e.time;
  return e;
}

void SimClock::advance_to(TimestampMs t) {
  if (t < now_) fail(ErrorCode::invalid_input, "simulation time cannot move backwards");
  now_ = t;
}

World::World(Environment env, std::vector<SimDevice> devices, WorldConfig config)
    : env_(std::move(env)),
      devices_(std::move(devices)),
      config_(std::move(config)),
      clock_(config_.start_ms),
      rng_(config_.seed) {
  env_.validate();
  config_.path_loss.validate();
  config_.cycle.validate();
  for (const auto& d : devices_) {
    d.validate();
    hashed_.push_back(hash_user_id(d.raw_id, config_.salt));
  }
  beacons_.resize(env_.beacons.size());
  for (std::size_t b = 0; b < beacons_.size(); ++b) {
    beacons_[b].busy_until.assign(devices_.size(), 0);
    clock_.schedule(config_.start_ms, SimClock::EventType::cycle_start, b);
  }
}

std::vector<TraceEvent> World::step(TimestampMs until_ms) {
  if (until_ms < clock_.now()) fail(ErrorCode::invalid_input, "step target lies in the past");
  std::vector<TraceEvent> trace;
  while (auto event = clock_.pop_before(until_ms)) {
    switch (event->type) {
      case SimClock::EventType::cycle_start:
        on_cycle_start(event->beacon, trace);
        break;
      case SimClock::EventType::batch_start:
        on_batch_start(event->beacon, event->batch, trace);
        break;
      case SimClock::EventType::batch_end:
        on_batch_end(event->beacon, event->batch);
        break;
    }
  }
  clock_.advance_to(until_ms);
  return trace;
}

void World::on_cycle_start(std::size_t b, std::vector<TraceEvent>& trace) {
  const TimestampMs now = clock_.now();
  auto& state = beacons_[b];
  const auto& beacon = env_.beacons[b];
  trace.push_back(TraceEvent{now, TraceKind::advertisement, b, 0, 0.0});

  std::vector<bool> connected(devices_.size(), false);
  for (DeviceIndex d = 0; d < devices_.size(); ++d) {
    connected[d] = devices_[d].paired && in_range(env_, beacon.id, devices_[d].position_at(now), config_.path_loss);
  }
  std::vector<DeviceIndex> queue;
  std::vector<bool> queued(devices_.size(), false);
  for (DeviceIndex d : state.deferred) {
    if (connected[d] && !queued[d]) {
      queue.push_back(d);
      queued[d] = true;
    }
  }
  for (DeviceIndex d = 0; d < devices_.size(); ++d) {
    if (connected[d] && !queued[d]) queue.push_back(d);
  }

  CycleSchedule schedule = schedule_cycle(queue, now, config_.cycle);
  state.deferred.assign(schedule.deferred.begin(), schedule.deferred.end());
  for (DeviceIndex d : schedule.deferred) trace.push_back(TraceEvent{now, TraceKind::deferral, b, d, 0.0});
  for (auto& batch : schedule.batches) {
    const std::uint64_t serial = next_batch_++;
    clock_.schedule(batch.start, SimClock::EventType::batch_start, b, serial);
    state.pending.emplace(serial, std::move(batch));
  }
  clock_.schedule(now + config_.cycle.cycle_period_ms, SimClock::EventType::cycle_start, b);
}

void World::on_batch_start(std::size_t b, std::uint64_t serial, std::vector<TraceEvent>& trace) {
  const TimestampMs now = clock_.now();
  auto& state = beacons_[b];
  const Batch& batch = state.pending.at(serial);
  const auto& beacon = env_.beacons[b];

  state.open_connections += batch.devices.size();
  peak_connections_ = std::max(peak_connections_, state.open_connections);
  for (DeviceIndex d : batch.devices) {
    if (state.busy_until[d] > now) ++overlapping_services_;
    state.busy_until[d] = batch.end;
    trace.push_back(TraceEvent{now, TraceKind::connection, b, d, 0.0});
    const Position at = devices_[d].position_at(now);
    // The device may have walked out of range since the cycle opened.
    if (!in_range(env_, beacon.id, at, config_.path_loss)) continue;
    const double rssi = rssi_at(env_, beacon.id, at, config_.path_loss, rng_);
    trace.push_back(TraceEvent{now, TraceKind::measurement, b, d, rssi});
    state.outbound.push_back(RssiSample::make(beacon.id, hashed_[d], rssi, now));
  }
  clock_.schedule(batch.end, SimClock::EventType::batch_end, b, serial);
}

void World::on_batch_end(std::size_t b, std::uint64_t serial) {
  auto& state = beacons_[b];
  auto it = state.pending.find(serial);
  state.open_connections -= it->second.devices.size();
  state.pending.erase(it);
}

std::vector<RssiSample> World::drain_outbound(std::size_t beacon) {
  std::vector<RssiSample> out;
  out.swap(beacons_.at(beacon).outbound);
  return out;
}

std::vector<RssiSample> World::drain_all_outbound() {
  std::vector<RssiSample> out;
  for (std::size_t b = 0; b < beacons_.size(); ++b) {
    auto part = drain_outbound(b);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace atlas::sim
