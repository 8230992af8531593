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

#include "atlas/wire/session.hpp"

#include <algorithm>
#include <limits>

#include "atlas/core/error.hpp"

namespace atlas::wire {

std::uint32_t prefix_for_role(std::uint32_t random_bits, Role role) {
  return (random_bits & 0x7fffffffu) | (static_cast<std::uint32_t>(role) << 31);
}

SessionKeys::SessionKeys(const Key32& key, NodeId self_id, NodeId peer_id, Role role, std::uint32_t local_prefix,
                         std::uint32_t peer_prefix, TimestampMs established_at)
    : key_(key),
      self_id_(self_id),
      peer_id_(peer_id),
      role_(role),
      local_prefix_(prefix_for_role(local_prefix, role)),
      peer_prefix_(prefix_for_role(peer_prefix, role == Role::initiator ? Role::responder : Role::initiator)),
      established_at_(established_at) {}

#ifdef ATLAS_PLAINTEXT_BENCH
SessionKeys SessionKeys::plaintext_for_benchmark(NodeId self_id, NodeId peer_id, Role role,
                                                 TimestampMs established_at) {
  SessionKeys s(Key32{}, self_id, peer_id, role, 0, 0, established_at);
  s.protection_ = Protection::plaintext;
  return s;
}
#endif

SecureFrame seal(SessionKeys& session, MsgType type, std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxPayloadBytes) fail(ErrorCode::invalid_input, "payload exceeds frame limit");
  if (session.tx_counter_ == std::numeric_limits<std::uint64_t>::max())
    fail(ErrorCode::session_expired, "transmit counter exhausted; re-key the session");

  SecureFrame frame;
  frame.msg_type = type;
  frame.sender_id = session.self_id_;
  frame.nonce = make_nonce(session.local_prefix_, session.tx_counter_ + 1);
  frame.ciphertext.resize(payload.size());  // header() reads the length
  if (session.protection_ == Protection::plaintext) {
    std::copy(payload.begin(), payload.end(), frame.ciphertext.begin());
    frame.tag = Tag16{};
  } else {
    const auto header = frame.header();
    frame.ciphertext = aead_encrypt(session.key_, frame.nonce, header, payload, frame.tag);
  }
  ++session.tx_counter_;
  return frame;
}

Opened open(SessionKeys& session, const SecureFrame& frame) {
  if (frame.sender_id != session.peer_id_) fail(ErrorCode::authentication_failure, "frame from unexpected sender");
  if (frame.nonce_prefix() != session.peer_prefix_)
    fail(ErrorCode::authentication_failure, "frame nonce prefix does not belong to this session");

  Opened out;
  out.msg_type = frame.msg_type;
  if (session.protection_ == Protection::plaintext) {
    if (frame.tag != Tag16{}) fail(ErrorCode::authentication_failure, "sealed frame on a plaintext session");
    out.payload = frame.ciphertext;
  } else {
    const auto header = frame.header();
    if (!aead_decrypt(session.key_, frame.nonce, header, frame.ciphertext, frame.tag, out.payload))
      fail(ErrorCode::authentication_failure, "frame failed authentication");
  }
  // Only authenticated counters are trusted for the replay window.
  const std::uint64_t counter = frame.nonce_counter();
  if (counter <= session.rx_counter_) fail(ErrorCode::replay_detected, "frame counter did not advance");
  session.rx_counter_ = counter;
  return out;
}

SecureFrame seal_at_rest(const Key32& key, const NodeId& writer, MsgType type, std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxPayloadBytes) fail(ErrorCode::invalid_input, "payload exceeds frame limit");
  SecureFrame frame;
  frame.msg_type = type;
  frame.sender_id = writer;
  frame.nonce = random_array<12>();
  frame.ciphertext.resize(payload.size());
  const auto header = frame.header();
  frame.ciphertext = aead_encrypt(key, frame.nonce, header, payload, frame.tag);
  return frame;
}

Bytes open_at_rest(const Key32& key, const SecureFrame& frame) {
  Bytes out;
  const auto header = frame.header();
  if (!aead_decrypt(key, frame.nonce, header, frame.ciphertext, frame.tag, out))
    fail(ErrorCode::authentication_failure, "stored frame failed authentication (wrong key or corrupted file)");
  return out;
}

#ifdef ATLAS_PLAINTEXT_BENCH
SecureFrame plaintext_at_rest(const NodeId& writer, MsgType type, std::span<const std::uint8_t> payload) {
  SecureFrame frame;
  frame.msg_type = type;
  frame.sender_id = writer;
  frame.ciphertext.assign(payload.begin(), payload.end());
  return frame;
}
#endif

Opened open_bytes(SessionKeys& session, std::span<const std::uint8_t> bytes) {
  return open(session, decode(bytes));
}

}  // namespace atlas::wire
