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

#include "atlas/core/hash.hpp"

#include <vector>

#include <sodium.h>

#include "atlas/core/error.hpp"

namespace atlas {

HashedUserId hash_user_id(std::span<const std::uint8_t> raw_id, std::span<const std::uint8_t> salt) {
  if (raw_id.empty()) fail(ErrorCode::invalid_input, "raw device id must not be empty");
  if (salt.size() < kMinSaltBytes) fail(ErrorCode::invalid_input, "user id salt must be at least 16 bytes");

  crypto_hash_sha256_state state;
  crypto_hash_sha256_init(&state);
  crypto_hash_sha256_update(&state, salt.data(), salt.size());
  crypto_hash_sha256_update(&state, raw_id.data(), raw_id.size());
  HashedUserId::Bytes digest{};
  crypto_hash_sha256_final(&state, digest.data());
  return HashedUserId(digest);
}

HashedUserId hash_user_id(std::string_view raw_id, std::span<const std::uint8_t> salt) {
  return hash_user_id(
      std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(raw_id.data()), raw_id.size()), salt);
}

}  // namespace atlas
