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

// The hub: owns the fingerprint map, terminates beacon uplinks, runs the
// live cycle and answers queries.
//
// Threading: run_cycle, ingest_setup and prune_retention are the single
// writer and are serialized internally. track, contact_trace and status may
// run concurrently with them and see the store before or after a whole
// cycle, never in between.

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "atlas/core/types.hpp"
#include "atlas/hub/store.hpp"
#include "atlas/localizer/localizer.hpp"
#include "atlas/pipeline/pipeline.hpp"
#include "atlas/sim/world.hpp"
#include "atlas/wire/handshake.hpp"

namespace atlas::hub {

inline constexpr TimestampMs kDayMs = 24LL * 3600 * 1000;

struct HubConfig {
  sim::CycleConfig cycle;
  pipeline::FingerprintOptions fingerprint;
  localizer::LocalizeOptions localize;
  int retention_days = 28;
  wire::NodeId id{'a', 't', 'l', 'a', 's', '-', 'h', 'u', 'b', 0, 0, 0, 0, 0, 0, 1};
  wire::Key32 psk{};
  /// Accept plaintext uplink sessions; the overhead benchmark only.
  bool allow_plaintext = false;
  /// When set, ingest_setup also writes the map here.
  std::string map_path;
};

enum class HubMode { setup, live };
std::string_view to_string(HubMode mode);

struct CycleReport {
  TimestampMs cycle_start = 0;
  TimestampMs cycle_end = 0;
  std::size_t batches_accepted = 0;
  std::size_t batches_dropped = 0;
  std::size_t samples = 0;
  std::size_t samples_outside_window = 0;
  std::size_t users = 0;
  std::size_t unlocatable = 0;
  double passive_ms = 0.0;
  std::vector<LocationRecord> records;
};

struct ContactEntry {
  HashedUserId other;
  std::string area;
  std::vector<TimestampMs> timestamps;  // shared cycle timestamps, ascending

  TimestampMs first() const { return timestamps.front(); }
  TimestampMs last() const { return timestamps.back(); }
  bool operator==(const ContactEntry&) const = default;
};

struct HubStatus {
  HubMode mode = HubMode::setup;
  std::size_t map_points = 0;
  std::size_t records = 0;
  std::size_t cycles = 0;
  std::size_t dropped_batches = 0;
  std::size_t uplinks = 0;
  TimestampMs last_cycle_end = 0;
  double last_passive_ms = 0.0;
};

class Hub {
 public:
  Hub(HubConfig config, std::shared_ptr<LocationStore> store);

  /// Builds the map from survey walks, swaps it in and enters live mode.
  /// Throws Error(setup_failed) when there are no walks or the build fails.
  FingerprintMap ingest_setup(std::span<const pipeline::ReferenceWalk> walks, const Environment& env);
  /// Installs a previously built map and enters live mode.
  void load_map(FingerprintMap map);
  std::shared_ptr<const localizer::MatchIndex> map_index() const;

  /// Terminates a beacon's PSK handshake and keeps the resulting session.
  wire::SecureFrame accept_uplink(const wire::SecureFrame& hello, TimestampMs now);
  /// Installs an uplink session established elsewhere. Throws
  /// Error(plaintext_refused) for plaintext sessions unless allowed.
  void install_uplink(wire::SessionKeys session);

  /// Opens each encoded sample-batch frame (dropping and counting any that
  /// fail), then fingerprints and localizes every user seen in
  /// [cycle_start, cycle_start + period). Records carry the cycle end.
  /// Throws Error(not_ready) before a map is loaded.
  CycleReport run_cycle(TimestampMs cycle_start, const std::vector<wire::Bytes>& frames);
  /// Same, from already-opened samples (no transport).
  CycleReport run_cycle_samples(TimestampMs cycle_start, const std::vector<RssiSample>& samples);

  std::vector<LocationRecord> track(const HashedUserId& user, TimestampMs from, TimestampMs to) const;
  std::vector<ContactEntry> contact_trace(const HashedUserId& user, TimestampMs from, TimestampMs to) const;
  /// Removes records with timestamp < now - retention. Idempotent.
  std::size_t prune_retention(TimestampMs now);
  HubStatus status() const;

  const HubConfig& config() const { return config_; }
  LocationStore& store() { return *store_; }

 private:
  CycleReport process(TimestampMs cycle_start, std::vector<RssiSample> samples, CycleReport report);

  HubConfig config_;
  std::shared_ptr<LocationStore> store_;
  wire::PskServer psk_server_;

  mutable std::mutex map_mutex_;
  std::shared_ptr<const localizer::MatchIndex> index_;

  std::mutex writer_mutex_;
  std::map<wire::NodeId, wire::SessionKeys> uplinks_;

  std::atomic<std::size_t> uplink_count_{0};
  std::atomic<std::size_t> cycles_{0};
  std::atomic<std::size_t> dropped_{0};
  std::atomic<TimestampMs> last_cycle_end_{0};
  std::atomic<double> last_passive_ms_{0.0};
};

/// Pure join used by contact_trace, exposed for reuse.
std::vector<ContactEntry> contacts_in(const std::vector<LocationRecord>& records, const HashedUserId& user,
                                      TimestampMs from, TimestampMs to);

}  // namespace atlas::hub
