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

#include "atlas/wire/kdf.hpp"

#include <algorithm>

namespace atlas::wire {

SessionMaterial derive_session_material(const Key32& secret, const std::array<std::uint8_t, 32>& initiator_nonce,
                                        const std::array<std::uint8_t, 32>& responder_nonce, std::string_view label,
                                        const NodeId& initiator_id, const NodeId& responder_id) {
  Bytes salt(initiator_nonce.begin(), initiator_nonce.end());
  salt.insert(salt.end(), responder_nonce.begin(), responder_nonce.end());
  Bytes info(label.begin(), label.end());
  info.insert(info.end(), initiator_id.begin(), initiator_id.end());
  info.insert(info.end(), responder_id.begin(), responder_id.end());

  const Bytes okm = hkdf_sha256(secret, salt, info, 32 + 32 + 8);
  SessionMaterial m;
  std::copy_n(okm.begin(), 32, m.key.begin());
  std::copy_n(okm.begin() + 32, 32, m.mac_key.begin());
  auto u32 = [&](std::size_t at) {
    return (std::uint32_t{okm[at]} << 24) | (std::uint32_t{okm[at + 1]} << 16) | (std::uint32_t{okm[at + 2]} << 8) |
           std::uint32_t{okm[at + 3]};
  };
  m.initiator_prefix = u32(64);
  m.responder_prefix = u32(68);
  return m;
}

}  // namespace atlas::wire
