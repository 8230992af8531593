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

#include "atlas/core/ids.hpp"

#include <cctype>

#include "atlas/core/error.hpp"

namespace atlas {
namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::empty_window: return "empty-window";
    case ErrorCode::unknown_beacon: return "unknown-beacon";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::validation_error: return "validation-error";
    case ErrorCode::pairing_rejected: return "pairing-rejected";
    case ErrorCode::handshake_failed: return "handshake-failed";
    case ErrorCode::handshake_timeout: return "handshake-timeout";
    case ErrorCode::session_expired: return "session-expired";
    case ErrorCode::authentication_failure: return "authentication-failure";
    case ErrorCode::replay_detected: return "replay-detected";
    case ErrorCode::malformed_frame: return "malformed-frame";
    case ErrorCode::plaintext_refused: return "plaintext-refused";
    case ErrorCode::not_ready: return "not-ready";
    case ErrorCode::setup_failed: return "setup-failed";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

std::string from_hex_string(std::string_view hex) {
  if (hex.size() % 2 != 0) fail(ErrorCode::parse_error, "hex string has odd length");
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) fail(ErrorCode::parse_error, "invalid hex digit in '" + std::string(hex) + "'");
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

BeaconId BeaconId::parse(std::string_view text) {
  if (text.size() != 36) fail(ErrorCode::parse_error, "beacon uuid must be 36 characters: '" + std::string(text) + "'");
  Bytes bytes{};
  std::size_t out = 0;
  for (std::size_t i = 0; i < text.size();) {
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (text[i] != '-') fail(ErrorCode::parse_error, "beacon uuid has misplaced separator: '" + std::string(text) + "'");
      ++i;
      continue;
    }
    int hi = hex_value(text[i]);
    int lo = hex_value(text[i + 1]);
    if (hi < 0 || lo < 0) fail(ErrorCode::parse_error, "beacon uuid has invalid hex digit: '" + std::string(text) + "'");
    bytes[out++] = static_cast<std::uint8_t>((hi << 4) | lo);
    i += 2;
  }
  return BeaconId(bytes);
}

BeaconId BeaconId::from_index(std::uint64_t n) {
  Bytes bytes{};
  for (int i = 0; i < 8; ++i) bytes[15 - i] = static_cast<std::uint8_t>(n >> (8 * i));
  return BeaconId(bytes);
}

std::string BeaconId::to_string() const {
  std::string hex = to_hex(bytes_);
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" + hex.substr(16, 4) +
         "-" + hex.substr(20, 12);
}

HashedUserId HashedUserId::parse_hex(std::string_view hex) {
  if (hex.size() != 64) fail(ErrorCode::parse_error, "hashed user id must be 64 hex characters");
  for (char c : hex) {
    if (hex_value(c) < 0 || std::isupper(static_cast<unsigned char>(c)))
      fail(ErrorCode::parse_error, "hashed user id must be lowercase hex");
  }
  std::string raw = from_hex_string(hex);
  Bytes bytes{};
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(raw[i]);
  return HashedUserId(bytes);
}

std::string HashedUserId::to_hex() const { return atlas::to_hex(bytes_); }

}  // namespace atlas
