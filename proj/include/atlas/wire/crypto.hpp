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

// Thin wrappers over libsodium primitives: HMAC-SHA256, HKDF-SHA256
// (RFC 5869) and the ChaCha20-Poly1305 IETF AEAD (256-bit key, 96-bit
// nonce, 128-bit tag).

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace atlas::wire {

using Key32 = std::array<std::uint8_t, 32>;
using Nonce12 = std::array<std::uint8_t, 12>;
using Tag16 = std::array<std::uint8_t, 16>;
using Mac32 = std::array<std::uint8_t, 32>;
using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kKeyBytes = 32;
inline constexpr std::size_t kNonceBytes = 12;
inline constexpr std::size_t kTagBytes = 16;

void ensure_crypto_ready();

void random_fill(std::span<std::uint8_t> out);
template <std::size_t N>
std::array<std::uint8_t, N> random_array() {
  std::array<std::uint8_t, N> out{};
  random_fill(out);
  return out;
}

Mac32 hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message);
Mac32 hmac_sha256(std::span<const std::uint8_t> key, std::initializer_list<std::span<const std::uint8_t>> parts);

/// Extract-then-expand; `length` <= 255 * 32.
Bytes hkdf_sha256(std::span<const std::uint8_t> ikm, std::span<const std::uint8_t> salt,
                  std::span<const std::uint8_t> info, std::size_t length);

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Returns ciphertext (same length as plaintext) and writes the tag.
Bytes aead_encrypt(const Key32& key, const Nonce12& nonce, std::span<const std::uint8_t> ad,
                   std::span<const std::uint8_t> plaintext, Tag16& tag);
/// False when the tag does not verify.
bool aead_decrypt(const Key32& key, const Nonce12& nonce, std::span<const std::uint8_t> ad,
                  std::span<const std::uint8_t> ciphertext, const Tag16& tag, Bytes& plaintext);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace atlas::wire
