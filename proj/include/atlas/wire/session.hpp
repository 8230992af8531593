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
#include <span>

#include "atlas/core/types.hpp"
#include "atlas/wire/frame.hpp"

namespace atlas::wire {

enum class Role : std::uint8_t { initiator = 0, responder = 1 };

enum class Protection { sealed, plaintext };

struct Opened {
  MsgType msg_type = MsgType::control;
  Bytes payload;
};

/// Keys and counters of one end of an established connection.
///
/// Each side stamps its frames with its own 32-bit nonce prefix, whose top
/// bit is the side's role, so the two directions never share a nonce under
/// the shared key. Owned by exactly one connection handler; not
/// thread-safe.
class SessionKeys {
 public:
  SessionKeys(const Key32& key, NodeId self_id, NodeId peer_id, Role role, std::uint32_t local_prefix,
              std::uint32_t peer_prefix, TimestampMs established_at);

#ifdef ATLAS_PLAINTEXT_BENCH
  /// Unencrypted session for overhead measurements. Frames carry the payload
  /// in clear with an all-zero tag.
  static SessionKeys plaintext_for_benchmark(NodeId self_id, NodeId peer_id, Role role, TimestampMs established_at);
#endif

  const Key32& key() const { return key_; }
  const NodeId& self_id() const { return self_id_; }
  const NodeId& peer_id() const { return peer_id_; }
  Role role() const { return role_; }
  TimestampMs established_at() const { return established_at_; }
  std::uint64_t tx_counter() const { return tx_counter_; }
  std::uint64_t rx_counter() const { return rx_counter_; }
  Protection protection() const { return protection_; }

  /// Test hook: positions the transmit counter, e.g. near exhaustion.
  void set_tx_counter_for_testing(std::uint64_t value) { tx_counter_ = value; }

 private:
  friend SecureFrame seal(SessionKeys&, MsgType, std::span<const std::uint8_t>);
  friend Opened open(SessionKeys&, const SecureFrame&);

  Key32 key_{};
  NodeId self_id_{};
  NodeId peer_id_{};
  Role role_ = Role::initiator;
  std::uint32_t local_prefix_ = 0;
  std::uint32_t peer_prefix_ = 0;
  TimestampMs established_at_ = 0;
  std::uint64_t tx_counter_ = 0;
  std::uint64_t rx_counter_ = 0;
  Protection protection_ = Protection::sealed;
};

/// Forces the role bit into a random prefix.
std::uint32_t prefix_for_role(std::uint32_t random_bits, Role role);

/// Throws Error(session_expired) once the 64-bit counter is exhausted.
SecureFrame seal(SessionKeys& session, MsgType type, std::span<const std::uint8_t> payload);

/// Throws Error(authentication_failure) when the tag, sender or nonce prefix
/// do not verify, Error(replay_detected) when the counter does not advance.
Opened open(SessionKeys& session, const SecureFrame& frame);

/// Sealing for data at rest: a random 96-bit nonce per frame and no
/// counters, since frames outlive any one writer.
SecureFrame seal_at_rest(const Key32& key, const NodeId& writer, MsgType type, std::span<const std::uint8_t> payload);
/// Throws Error(authentication_failure) when the frame does not verify.
Bytes open_at_rest(const Key32& key, const SecureFrame& frame);

#ifdef ATLAS_PLAINTEXT_BENCH
SecureFrame plaintext_at_rest(const NodeId& writer, MsgType type, std::span<const std::uint8_t> payload);
#endif

/// decode() + open().
Opened open_bytes(SessionKeys& session, std::span<const std::uint8_t> bytes);

}  // namespace atlas::wire
