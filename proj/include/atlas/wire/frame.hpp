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

// SecureFrame wire layout (all multi-byte integers big-endian):
//
//   offset  size  field
//        0     4  magic "ATLS"
//        4     1  version (0x01)
//        5     1  msg_type
//        6    16  sender_id
//       22    12  nonce  (4-byte session prefix || 8-byte counter)
//       34     4  payload_len
//       38     n  ciphertext
//     38+n    16  tag
//
// Bytes 0..37 are the header and are bound to the tag as associated data.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "atlas/wire/crypto.hpp"

namespace atlas::wire {

enum class MsgType : std::uint8_t {
  pairing = 0x01,
  handshake = 0x02,
  sample_batch = 0x10,
  map_sync = 0x11,
  location_report = 0x12,
  control = 0x13,
};

bool is_known_msg_type(std::uint8_t value);
std::string_view to_string(MsgType type);

using NodeId = std::array<std::uint8_t, 16>;

inline constexpr std::array<std::uint8_t, 4> kMagic = {'A', 'T', 'L', 'S'};
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderBytes = 38;
inline constexpr std::size_t kFrameOverhead = kHeaderBytes + kTagBytes;
inline constexpr std::size_t kMaxPayloadBytes = 16u << 20;

struct SecureFrame {
  MsgType msg_type = MsgType::control;
  NodeId sender_id{};
  Nonce12 nonce{};
  Bytes ciphertext;
  Tag16 tag{};

  std::array<std::uint8_t, kHeaderBytes> header() const;
  std::uint32_t nonce_prefix() const;
  std::uint64_t nonce_counter() const;

  bool operator==(const SecureFrame&) const = default;
};

Nonce12 make_nonce(std::uint32_t prefix, std::uint64_t counter);

Bytes encode(const SecureFrame& frame);
/// Throws Error(malformed_frame) on bad magic, version, msg type or length.
SecureFrame decode(std::span<const std::uint8_t> bytes);

/// Total encoded size of the frame starting at `bytes`, read from its
/// header; nullopt when fewer than kHeaderBytes are available.
std::optional<std::size_t> encoded_size(std::span<const std::uint8_t> bytes);

}  // namespace atlas::wire
