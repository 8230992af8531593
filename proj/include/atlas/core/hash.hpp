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

#include <cstdint>
#include <span>
#include <string_view>

#include "atlas/core/ids.hpp"

namespace atlas {

inline constexpr std::size_t kMinSaltBytes = 16;

/// SHA-256 over salt || raw_id. The salt is fixed per environment at setup,
/// so the same device maps to the same digest within one environment only.
HashedUserId hash_user_id(std::span<const std::uint8_t> raw_id, std::span<const std::uint8_t> salt);
HashedUserId hash_user_id(std::string_view raw_id, std::span<const std::uint8_t> salt);

}  // namespace atlas
