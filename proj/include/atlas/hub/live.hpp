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

// End-to-end live stage in simulation: the radio world, device pairing,
// beacon pings, beacon-to-hub uplinks and the hub cycle, with every frame
// crossing a tapped in-process channel.
//
// Per cycle each beacon pings every device it measured (sealed challenge,
// sealed echo), attaches the measured RSSI, and ships the cycle's samples to
// the hub as one sealed sample batch.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "atlas/hub/hub.hpp"
#include "atlas/sim/scenario.hpp"
#include "atlas/wire/channel.hpp"
#include "atlas/wire/pairing.hpp"

namespace atlas::hub {

struct CycleOutcome {
  CycleReport report;
  /// Area containing each located device at its measurement instant;
  /// evaluation only, the hub never sees it.
  std::map<HashedUserId, std::string> truth;
  std::size_t correct = 0;
};

class LiveSystem {
 public:
  /// Pairs every paired device with every beacon and opens one uplink per
  /// beacon. The hub must already hold a map.
  LiveSystem(const sim::Scenario& scenario, std::shared_ptr<Hub> hub, std::shared_ptr<wire::Wiretap> tap = nullptr);

  CycleOutcome run_cycle();
  TimestampMs now() const { return world_.now(); }
  const sim::World& world() const { return world_; }
  std::size_t rehandshakes() const { return rehandshakes_; }
  std::size_t pings() const { return pings_; }

 private:
  struct DeviceLink {
    wire::SessionKeys device;  // device end
    wire::SessionKeys beacon;  // beacon end
  };
  struct BeaconNode {
    BeaconId id;
    std::optional<wire::SessionKeys> uplink;
    std::map<HashedUserId, std::size_t> link_of;  // learned from device hellos
  };

  void open_uplink(std::size_t beacon);
  void ping(std::size_t beacon, const HashedUserId& device);

  std::shared_ptr<Hub> hub_;
  std::shared_ptr<wire::Wiretap> tap_;
  sim::World world_;
  wire::Channel radio_;   // device <-> beacon traffic
  wire::Channel uplink_;  // beacon -> hub traffic
  std::vector<BeaconNode> beacons_;
  std::vector<DeviceLink> links_;
  std::map<HashedUserId, std::size_t> device_of_;
  std::size_t rehandshakes_ = 0;
  std::size_t pings_ = 0;
};

struct LiveSummary {
  std::size_t cycles = 0;
  std::size_t records = 0;
  std::size_t correct = 0;
  std::size_t dropped_batches = 0;
  double max_passive_ms = 0.0;
  std::vector<LocationRecord> log;

  double accuracy() const { return records == 0 ? 0.0 : static_cast<double>(correct) / records; }
};

/// Runs `cycles` cycles of the scenario against `hub`.
LiveSummary run_live(const sim::Scenario& scenario, std::shared_ptr<Hub> hub, std::size_t cycles,
                     std::shared_ptr<wire::Wiretap> tap = nullptr);

HubConfig hub_config_for(const sim::Scenario& scenario);

/// Survey walk for the scenario with its own setup parameters.
std::vector<pipeline::ReferenceWalk> scenario_walk(const sim::Scenario& scenario);

}  // namespace atlas::hub
