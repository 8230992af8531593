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

// Pre-shared-key handshake between a beacon (client) and the hub (server).
//
//   hello:  handshake frame, payload = client nonce (32 B),
//           tag = HMAC(psk, header || payload)[0..16]
//   reply:  handshake frame, payload = server nonce (32 B) || confirm (32 B),
//           tag = HMAC(psk, header || payload || client nonce)[0..16]
//
// confirm = HMAC(mac key, "confirm" || client nonce || server nonce), where
// the mac key comes from the same HKDF expansion as the session key.

#include <set>

#include "atlas/wire/session.hpp"

namespace atlas::wire {

inline constexpr TimestampMs kDefaultHandshakeTimeoutMs = 5000;
inline constexpr TimestampMs kRehandshakeIntervalMs = 24LL * 3600 * 1000;

class PskClient {
 public:
  PskClient(NodeId self_id, const Key32& psk, TimestampMs timeout_ms = kDefaultHandshakeTimeoutMs);

  SecureFrame hello(TimestampMs now);
  /// Throws Error(handshake_timeout) when the reply arrives after the
  /// timeout, Error(handshake_failed) when it does not authenticate.
  SessionKeys finish(const SecureFrame& reply, TimestampMs now);

  const NodeId& self_id() const { return self_id_; }

 private:
  NodeId self_id_{};
  Key32 psk_{};
  TimestampMs timeout_ms_;
  std::array<std::uint8_t, 32> nonce_{};
  TimestampMs sent_at_ = 0;
  bool pending_ = false;
};

class PskServer {
 public:
  PskServer(NodeId self_id, const Key32& psk);

  struct Accepted {
    SecureFrame reply;
    SessionKeys session;
  };

  /// Throws Error(handshake_failed) on a bad tag or a reused client nonce.
  Accepted accept(const SecureFrame& hello, TimestampMs now);

  const NodeId& self_id() const { return self_id_; }

 private:
  NodeId self_id_{};
  Key32 psk_{};
  std::set<std::array<std::uint8_t, 32>> seen_nonces_;
};

struct PskSessions {
  SessionKeys client;
  SessionKeys server;
};

PskSessions psk_session(PskClient& client, PskServer& server, TimestampMs now);

/// True when a session established at `established_at` is due for renewal.
bool rehandshake_due(const SessionKeys& session, TimestampMs now);

}  // namespace atlas::wire
