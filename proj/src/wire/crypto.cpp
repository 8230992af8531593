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

#include "atlas/wire/crypto.hpp"

#include <mutex>
#include <string_view>

#include <sodium.h>

#include "atlas/core/error.hpp"

namespace atlas::wire {

void ensure_crypto_ready() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) fail(ErrorCode::io_error, "libsodium failed to initialise");
  });
}

void random_fill(std::span<std::uint8_t> out) {
  ensure_crypto_ready();
  randombytes_buf(out.data(), out.size());
}

Mac32 hmac_sha256(std::span<const std::uint8_t> key, std::initializer_list<std::span<const std::uint8_t>> parts) {
  ensure_crypto_ready();
  crypto_auth_hmacsha256_state state;
  crypto_auth_hmacsha256_init(&state, key.data(), key.size());
  for (auto part : parts) crypto_auth_hmacsha256_update(&state, part.data(), part.size());
  Mac32 out{};
  crypto_auth_hmacsha256_final(&state, out.data());
  sodium_memzero(&state, sizeof state);
  return out;
}

Mac32 hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message) {
  return hmac_sha256(key, {message});
}

Bytes hkdf_sha256(std::span<const std::uint8_t> ikm, std::span<const std::uint8_t> salt,
                  std::span<const std::uint8_t> info, std::size_t length) {
  if (length > 255 * 32) fail(ErrorCode::invalid_input, "HKDF output too long");
  static const std::array<std::uint8_t, 32> kZeroSalt{};
  const Mac32 prk = hmac_sha256(salt.empty() ? std::span<const std::uint8_t>(kZeroSalt) : salt, ikm);

  Bytes out;
  out.reserve(length);
  Mac32 block{};
  std::size_t block_len = 0;
  for (std::uint8_t counter = 1; out.size() < length; ++counter) {
    const std::uint8_t c[1] = {counter};
    block = hmac_sha256(prk, {std::span<const std::uint8_t>(block.data(), block_len), info, c});
    block_len = block.size();
    for (std::size_t i = 0; i < block.size() && out.size() < length; ++i) out.push_back(block[i]);
  }
  return out;
}

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) return false;
  return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

Bytes aead_encrypt(const Key32& key, const Nonce12& nonce, std::span<const std::uint8_t> ad,
                   std::span<const std::uint8_t> plaintext, Tag16& tag) {
  ensure_crypto_ready();
  Bytes ciphertext(plaintext.size());
  unsigned long long tag_len = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt_detached(ciphertext.data(), tag.data(), &tag_len, plaintext.data(),
                                                     plaintext.size(), ad.data(), ad.size(), nullptr, nonce.data(),
                                                     key.data());
  return ciphertext;
}

bool aead_decrypt(const Key32& key, const Nonce12& nonce, std::span<const std::uint8_t> ad,
                  std::span<const std::uint8_t> ciphertext, const Tag16& tag, Bytes& plaintext) {
  ensure_crypto_ready();
  plaintext.resize(ciphertext.size());
  const int rc = crypto_aead_chacha20poly1305_ietf_decrypt_detached(plaintext.data(), nullptr, ciphertext.data(),
                                                                    ciphertext.size(), tag.data(), ad.data(), ad.size(),
                                                                    nonce.data(), key.data());
  if (rc != 0) {
    sodium_memzero(plaintext.data(), plaintext.size());
    plaintext.clear();
    return false;
  }
  return true;
}

}  // namespace atlas::wire
