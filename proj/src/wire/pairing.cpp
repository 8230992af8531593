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

#include "atlas/wire/pairing.hpp"

#include <algorithm>
#include <charconv>

#include "atlas/core/error.hpp"
#include "atlas/wire/kdf.hpp"

namespace atlas::wire {
namespace {

constexpr std::string_view kQrScheme = "atlas-pair";
constexpr std::string_view kOobInfo = "atlas/oob/v1";

Tag16 pairing_tag(const Key32& secret, const SecureFrame& frame, std::span<const std::uint8_t> bound) {
  const auto header = frame.header();
  const Mac32 mac = hmac_sha256(secret, {header, frame.ciphertext, bound});
  Tag16 tag{};
  std::copy_n(mac.begin(), tag.size(), tag.begin());
  return tag;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

PairingSecret PairingSecret::issue(std::string environment_id, TimestampMs issued_at, std::vector<std::uint8_t> salt) {
  PairingSecret s;
  s.secret = random_array<32>();
  s.environment_id = std::move(environment_id);
  s.issued_at = issued_at;
  s.salt = std::move(salt);
  return s;
}

std::string PairingSecret::to_qr_payload() const {
  return std::string(kQrScheme) + ":1:" + environment_id + ":" + std::to_string(issued_at) + ":" + to_hex(secret) +
         ":" + to_hex(salt);
}

PairingSecret PairingSecret::from_qr_payload(std::string_view payload) {
  // The environment id may itself contain ':', so split from both ends.
  auto parts = split(payload, ':');
  if (parts.size() < 6 || parts[0] != kQrScheme || parts[1] != "1")
    fail(ErrorCode::parse_error, "not an atlas pairing payload");
  PairingSecret s;
  const std::size_t n = parts.size();
  std::string env;
  for (std::size_t i = 2; i + 3 < n; ++i) env += (i > 2 ? ":" : "") + std::string(parts[i]);
  s.environment_id = env;
  auto ts = parts[n - 3];
  auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), s.issued_at);
  if (ec != std::errc() || ptr != ts.data() + ts.size()) fail(ErrorCode::parse_error, "bad pairing timestamp");
  std::string secret = from_hex_string(parts[n - 2]);
  if (secret.size() != 32) fail(ErrorCode::parse_error, "pairing secret must be 32 bytes");
  std::copy(secret.begin(), secret.end(), s.secret.begin());
  std::string salt = from_hex_string(parts[n - 1]);
  s.salt.assign(salt.begin(), salt.end());
  return s;
}

NodeId node_id(const BeaconId& beacon) { return beacon.bytes(); }

PairingDevice::PairingDevice(PairingSecret secret) : secret_(std::move(secret)) {}

SecureFrame PairingDevice::request() {
  session_id_ = random_array<16>();
  nonce_ = random_array<32>();
  pending_ = true;
  SecureFrame f;
  f.msg_type = MsgType::pairing;
  f.sender_id = session_id_;
  f.nonce = random_array<12>();
  f.ciphertext.assign(nonce_.begin(), nonce_.end());
  f.tag = pairing_tag(secret_.secret, f, {});
  return f;
}

SessionKeys PairingDevice::complete(const SecureFrame& reply, TimestampMs now) {
  if (!pending_) fail(ErrorCode::pairing_rejected, "no pairing attempt in progress");
  if (reply.msg_type != MsgType::pairing || reply.ciphertext.size() != 32)
    fail(ErrorCode::pairing_rejected, "malformed pairing reply");
  if (!constant_time_equal(pairing_tag(secret_.secret, reply, nonce_), reply.tag))
    fail(ErrorCode::pairing_rejected, "pairing reply failed authentication");
  pending_ = false;

  std::array<std::uint8_t, 32> beacon_nonce{};
  std::copy(reply.ciphertext.begin(), reply.ciphertext.end(), beacon_nonce.begin());
  auto keys = derive_session_material(secret_.secret, nonce_, beacon_nonce, kOobInfo, session_id_, reply.sender_id);
  return SessionKeys(keys.key, session_id_, reply.sender_id, Role::initiator, keys.initiator_prefix,
                     keys.responder_prefix, now);
}

PairingBeacon::PairingBeacon(BeaconId id, const Key32& secret) : id_(id), secret_(secret) {}

PairingBeacon::Accepted PairingBeacon::accept(const SecureFrame& request, TimestampMs now) {
  if (request.msg_type != MsgType::pairing || request.ciphertext.size() != 32)
    fail(ErrorCode::pairing_rejected, "malformed pairing request");
  if (!constant_time_equal(pairing_tag(secret_, request, {}), request.tag))
    fail(ErrorCode::pairing_rejected, "pairing request failed authentication");
  std::array<std::uint8_t, 32> device_nonce{};
  std::copy(request.ciphertext.begin(), request.ciphertext.end(), device_nonce.begin());
  if (!seen_nonces_.insert(device_nonce).second) fail(ErrorCode::pairing_rejected, "replayed pairing request");

  const auto beacon_nonce = random_array<32>();
  SecureFrame reply;
  reply.msg_type = MsgType::pairing;
  reply.sender_id = node_id(id_);
  reply.nonce = random_array<12>();
  reply.ciphertext.assign(beacon_nonce.begin(), beacon_nonce.end());
  reply.tag = pairing_tag(secret_, reply, device_nonce);

  auto keys = derive_session_material(secret_, device_nonce, beacon_nonce, kOobInfo, request.sender_id, reply.sender_id);
  return Accepted{reply, SessionKeys(keys.key, reply.sender_id, request.sender_id, Role::responder,
                                     keys.responder_prefix, keys.initiator_prefix, now)};
}

PairedSessions oob_pair(PairingDevice& device, PairingBeacon& beacon, TimestampMs now) {
  auto request = device.request();
  auto accepted = beacon.accept(request, now);
  auto device_session = device.complete(accepted.reply, now);
  return PairedSessions{std::move(device_session), std::move(accepted.session)};
}

}  // namespace atlas::wire
