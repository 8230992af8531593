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
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace atlas {

/// 128-bit beacon identifier, rendered in the canonical 8-4-4-4-12 hex form.
class BeaconId {
 public:
  using Bytes = std::array<std::uint8_t, 16>;

  constexpr BeaconId() = default;
  explicit constexpr BeaconId(const Bytes& bytes) : bytes_(bytes) {}

  /// Accepts upper- or lowercase hex; throws Error(parse_error) otherwise.
  static BeaconId parse(std::string_view text);
  /// Convenience for tests and generated scenarios: the uuid whose low
  /// 64 bits hold `n` and whose high bits are zero.
  static BeaconId from_index(std::uint64_t n);

  std::string to_string() const;
  const Bytes& bytes() const { return bytes_; }

  auto operator<=>(const BeaconId&) const = default;

 private:
  Bytes bytes_{};
};

/// Salted SHA-256 digest of a device identifier. Only hash_user_id (and the
/// parsers for stored data) construct these.
class HashedUserId {
 public:
  using Bytes = std::array<std::uint8_t, 32>;

  constexpr HashedUserId() = default;
  explicit constexpr HashedUserId(const Bytes& bytes) : bytes_(bytes) {}

  static HashedUserId parse_hex(std::string_view hex);
  std::string to_hex() const;
  const Bytes& bytes() const { return bytes_; }

  auto operator<=>(const HashedUserId&) const = default;

 private:
  Bytes bytes_{};
};

class ReferencePointId {
 public:
  ReferencePointId() = default;
  explicit ReferencePointId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  auto operator<=>(const ReferencePointId&) const = default;

 private:
  std::string value_;
};

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws Error(parse_error) on odd length or non-hex characters.
std::string from_hex_string(std::string_view hex);

}  // namespace atlas

template <>
struct std::hash<atlas::BeaconId> {
  std::size_t operator()(const atlas::BeaconId& id) const noexcept {
    std::size_t h = 0;
    for (auto b : id.bytes()) h = h * 131 + b;
    return h;
  }
};

template <>
struct std::hash<atlas::HashedUserId> {
  std::size_t operator()(const atlas::HashedUserId& id) const noexcept {
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | id.bytes()[i];
    return h;
  }
};
