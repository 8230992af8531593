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

#include "atlas/wire/frame.hpp"

#include <algorithm>

#include "atlas/core/error.hpp"

namespace atlas::wire {
namespace {

void put_u32(std::uint8_t* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v >> (24 - 8 * i));
}

std::uint32_t get_u32(const std::uint8_t* in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

bool is_known_msg_type(std::uint8_t v) {
  return v == 0x01 || v == 0x02 || v == 0x10 || v == 0x11 || v == 0x12 || v == 0x13;
}

std::string_view to_string(MsgType type) {
  switch (type) {
    case MsgType::pairing: return "pairing";
    case MsgType::handshake: return "handshake";
    case MsgType::sample_batch: return "sample-batch";
    case MsgType::map_sync: return "map-sync";
    case MsgType::location_report: return "location-report";
    case MsgType::control: return "control";
  }
  return "?";
}

Nonce12 make_nonce(std::uint32_t prefix, std::uint64_t counter) {
  Nonce12 n{};
  put_u32(n.data(), prefix);
  for (int i = 0; i < 8; ++i) n[4 + i] = static_cast<std::uint8_t>(counter >> (56 - 8 * i));
  return n;
}

std::uint32_t SecureFrame::nonce_prefix() const { return get_u32(nonce.data()); }

std::uint64_t SecureFrame::nonce_counter() const {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | nonce[4 + i];
  return v;
}

std::array<std::uint8_t, kHeaderBytes> SecureFrame::header() const {
  std::array<std::uint8_t, kHeaderBytes> h{};
  std::copy(kMagic.begin(), kMagic.end(), h.begin());
  h[4] = kVersion;
  h[5] = static_cast<std::uint8_t>(msg_type);
  std::copy(sender_id.begin(), sender_id.end(), h.begin() + 6);
  std::copy(nonce.begin(), nonce.end(), h.begin() + 22);
  put_u32(h.data() + 34, static_cast<std::uint32_t>(ciphertext.size()));
  return h;
}

Bytes encode(const SecureFrame& frame) {
  if (frame.ciphertext.size() > kMaxPayloadBytes) fail(ErrorCode::invalid_input, "frame payload too large");
  Bytes out;
  out.reserve(kFrameOverhead + frame.ciphertext.size());
  const auto h = frame.header();
  out.insert(out.end(), h.begin(), h.end());
  out.insert(out.end(), frame.ciphertext.begin(), frame.ciphertext.end());
  out.insert(out.end(), frame.tag.begin(), frame.tag.end());
  return out;
}

SecureFrame decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameOverhead) fail(ErrorCode::malformed_frame, "frame shorter than header and tag");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) fail(ErrorCode::malformed_frame, "bad frame magic");
  if (bytes[4] != kVersion) fail(ErrorCode::malformed_frame, "unsupported frame version");
  if (!is_known_msg_type(bytes[5])) fail(ErrorCode::malformed_frame, "unknown msg_type");
  const std::uint32_t len = get_u32(bytes.data() + 34);
  if (len > kMaxPayloadBytes || bytes.size() != kFrameOverhead + len)
    fail(ErrorCode::malformed_frame, "payload_len does not match frame size");

  SecureFrame f;
  f.msg_type = static_cast<MsgType>(bytes[5]);
  std::copy_n(bytes.begin() + 6, 16, f.sender_id.begin());
  std::copy_n(bytes.begin() + 22, 12, f.nonce.begin());
  f.ciphertext.assign(bytes.begin() + kHeaderBytes, bytes.begin() + kHeaderBytes + len);
  std::copy_n(bytes.begin() + kHeaderBytes + len, kTagBytes, f.tag.begin());
  return f;
}

std::optional<std::size_t> encoded_size(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) return std::nullopt;
  const std::size_t n = (std::size_t{bytes[34]} << 24) | (std::size_t{bytes[35]} << 16) | (std::size_t{bytes[36]} << 8) |
                        std::size_t{bytes[37]};
  return kFrameOverhead + n;
}

}  // namespace atlas::wire
