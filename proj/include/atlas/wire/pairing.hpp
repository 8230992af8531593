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

// Out-of-band pairing between a user device and a beacon.
//
// The pairing secret reaches the device through the QR channel only. Over
// the radio the two sides exchange fresh 32-byte nonces in pairing frames
// whose tags are HMAC-SHA256(secret, ...) truncated to 16 bytes, then both
// derive the session key with HKDF over (secret, device nonce, beacon
// nonce). The secret itself never crosses the radio channel.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "atlas/core/ids.hpp"
#include "atlas/wire/session.hpp"

namespace atlas::wire {

struct PairingSecret {
  Key32 secret{};
  std::string environment_id;
  TimestampMs issued_at = 0;
  /// Per-environment user-id salt, so the device can hash its own id.
  std::vector<std::uint8_t> salt;

  static PairingSecret issue(std::string environment_id, TimestampMs issued_at, std::vector<std::uint8_t> salt);

  /// "atlas-pair:1:<environment>:<issued_at>:<secret hex>:<salt hex>"
  std::string to_qr_payload() const;
  static PairingSecret from_qr_payload(std::string_view payload);
};

NodeId node_id(const BeaconId& beacon);

class PairingDevice {
 public:
  explicit PairingDevice(PairingSecret secret);

  /// Starts a pairing attempt with a fresh nonce and a fresh anonymous id.
  SecureFrame request();
  /// Throws Error(pairing_rejected) when the reply does not authenticate.
  SessionKeys complete(const SecureFrame& reply, TimestampMs now);

  const NodeId& session_id() const { return session_id_; }
  const PairingSecret& secret() const { return secret_; }

 private:
  PairingSecret secret_;
  NodeId session_id_{};
  std::array<std::uint8_t, 32> nonce_{};
  bool pending_ = false;
};

class PairingBeacon {
 public:
  PairingBeacon(BeaconId id, const Key32& secret);

  struct Accepted {
    SecureFrame reply;
    SessionKeys session;
  };

  /// Throws Error(pairing_rejected) on a bad tag or a device nonce seen before.
  Accepted accept(const SecureFrame& request, TimestampMs now);

  const BeaconId& id() const { return id_; }

 private:
  BeaconId id_;
  Key32 secret_{};
  std::set<std::array<std::uint8_t, 32>> seen_nonces_;
};

struct PairedSessions {
  SessionKeys device;
  SessionKeys beacon;
};

PairedSessions oob_pair(PairingDevice& device, PairingBeacon& beacon, TimestampMs now);

}  // namespace atlas::wire
