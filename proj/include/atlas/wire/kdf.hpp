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

#include <array>
#include <cstdint>
#include <string_view>

#include "atlas/wire/frame.hpp"

namespace atlas::wire {

struct SessionMaterial {
  Key32 key{};
  Key32 mac_key{};
  std::uint32_t initiator_prefix = 0;
  std::uint32_t responder_prefix = 0;
};

/// HKDF-SHA256(ikm = secret, salt = initiator_nonce || responder_nonce,
/// info = label || initiator_id || responder_id).
SessionMaterial derive_session_material(const Key32& secret, const std::array<std::uint8_t, 32>& initiator_nonce,
                                        const std::array<std::uint8_t, 32>& responder_nonce, std::string_view label,
                                        const NodeId& initiator_id, const NodeId& responder_id);

}  // namespace atlas::wire
