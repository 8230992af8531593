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

#include "atlas/wire/handshake.hpp"

#include <algorithm>

#include "atlas/core/error.hpp"
#include "atlas/wire/kdf.hpp"

namespace atlas::wire {
namespace {

constexpr std::string_view kPskInfo = "atlas/psk/v1";
constexpr std::string_view kConfirmLabel = "confirm";

Tag16 truncated(const Mac32& mac) {
  Tag16 tag{};
  std::copy_n(mac.begin(), tag.size(), tag.begin());
  return tag;
}

Tag16 handshake_tag(const Key32& psk, const SecureFrame& frame, std::span<const std::uint8_t> bound) {
  const auto header = frame.header();
  return truncated(hmac_sha256(psk, {header, frame.ciphertext, bound}));
}

Mac32 confirm_mac(const Key32& mac_key, const std::array<std::uint8_t, 32>& client_nonce,
                  const std::array<std::uint8_t, 32>& server_nonce) {
  return hmac_sha256(mac_key, {as_bytes(kConfirmLabel), client_nonce, server_nonce});
}

}  // namespace

PskClient::PskClient(NodeId self_id, const Key32& psk, TimestampMs timeout_ms)
    : self_id_(self_id), psk_(psk), timeout_ms_(timeout_ms) {
  if (timeout_ms <= 0) fail(ErrorCode::invalid_input, "handshake timeout must be positive");
}

SecureFrame PskClient::hello(TimestampMs now) {
  nonce_ = random_array<32>();
  sent_at_ = now;
  pending_ = true;
  SecureFrame f;
  f.msg_type = MsgType::handshake;
  f.sender_id = self_id_;
  f.nonce = random_array<12>();
  f.ciphertext.assign(nonce_.begin(), nonce_.end());
  f.tag = handshake_tag(psk_, f, {});
  return f;
}

SessionKeys PskClient::finish(const SecureFrame& reply, TimestampMs now) {
  if (!pending_) fail(ErrorCode::handshake_failed, "no handshake in progress");
  if (now - sent_at_ > timeout_ms_) {
    pending_ = false;
    fail(ErrorCode::handshake_timeout, "handshake reply arrived after " + std::to_string(now - sent_at_) + " ms");
  }
  if (reply.msg_type != MsgType::handshake || reply.ciphertext.size() != 64)
    fail(ErrorCode::handshake_failed, "malformed handshake reply");
  if (!constant_time_equal(handshake_tag(psk_, reply, nonce_), reply.tag))
    fail(ErrorCode::handshake_failed, "handshake reply failed authentication");

  std::array<std::uint8_t, 32> server_nonce{};
  std::copy_n(reply.ciphertext.begin(), 32, server_nonce.begin());
  auto m = derive_session_material(psk_, nonce_, server_nonce, kPskInfo, self_id_, reply.sender_id);
  const Mac32 expected = confirm_mac(m.mac_key, nonce_, server_nonce);
  if (!constant_time_equal(expected, std::span(reply.ciphertext).subspan(32)))
    fail(ErrorCode::handshake_failed, "handshake confirmation mismatch");
  pending_ = false;
  return SessionKeys(m.key, self_id_, reply.sender_id, Role::initiator, m.initiator_prefix, m.responder_prefix, now);
}

PskServer::PskServer(NodeId self_id, const Key32& psk) : self_id_(self_id), psk_(psk) {}

PskServer::Accepted PskServer::accept(const SecureFrame& hello, TimestampMs now) {
  if (hello.msg_type != MsgType::handshake || hello.ciphertext.size() != 32)
    fail(ErrorCode::handshake_failed, "malformed handshake hello");
  if (!constant_time_equal(handshake_tag(psk_, hello, {}), hello.tag))
    fail(ErrorCode::handshake_failed, "handshake hello failed authentication");
  std::array<std::uint8_t, 32> client_nonce{};
  std::copy(hello.ciphertext.begin(), hello.ciphertext.end(), client_nonce.begin());
  if (!seen_nonces_.insert(client_nonce).second) fail(ErrorCode::handshake_failed, "replayed handshake hello");

  const auto server_nonce = random_array<32>();
  auto m = derive_session_material(psk_, client_nonce, server_nonce, kPskInfo, hello.sender_id, self_id_);
  const Mac32 confirm = confirm_mac(m.mac_key, client_nonce, server_nonce);

  SecureFrame reply;
  reply.msg_type = MsgType::handshake;
  reply.sender_id = self_id_;
  reply.nonce = random_array<12>();
  reply.ciphertext.assign(server_nonce.begin(), server_nonce.end());
  reply.ciphertext.insert(reply.ciphertext.end(), confirm.begin(), confirm.end());
  reply.tag = handshake_tag(psk_, reply, client_nonce);
  return Accepted{reply, SessionKeys(m.key, self_id_, hello.sender_id, Role::responder, m.responder_prefix,
                                     m.initiator_prefix, now)};
}

PskSessions psk_session(PskClient& client, PskServer& server, TimestampMs now) {
  auto hello = client.hello(now);
  auto accepted = server.accept(hello, now);
  auto client_session = client.finish(accepted.reply, now);
  return PskSessions{std::move(client_session), std::move(accepted.session)};
}

bool rehandshake_due(const SessionKeys& session, TimestampMs now) {
  return now - session.established_at() >= kRehandshakeIntervalMs;
}

}  // namespace atlas::wire
