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

// Transports for encoded frames: an in-process queue with an optional
// passive wiretap, and a length-prefixed stream over a file descriptor.

#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "atlas/wire/frame.hpp"

namespace atlas::wire {

/// Records every byte that crosses the channels it is attached to.
class Wiretap {
 public:
  void record(std::span<const std::uint8_t> bytes);

  std::vector<Bytes> captures() const;
  std::size_t frame_count() const;
  std::size_t total_bytes() const;
  /// True when `needle` occurs inside any single captured frame.
  bool contains(std::span<const std::uint8_t> needle) const;
  void clear();

 private:
  mutable std::mutex mutex_;
  std::vector<Bytes> captures_;
  std::size_t total_ = 0;
};

/// One-directional FIFO of encoded frames. Thread-safe.
class Channel {
 public:
  explicit Channel(std::shared_ptr<Wiretap> tap = nullptr) : tap_(std::move(tap)) {}

  void send(const SecureFrame& frame);
  void send_bytes(Bytes bytes);
  std::optional<Bytes> receive();
  std::size_t pending() const;

 private:
  std::shared_ptr<Wiretap> tap_;
  mutable std::mutex mutex_;
  std::deque<Bytes> queue_;
};

/// Writes a 4-byte big-endian length then the bytes. Throws Error(io_error).
void write_message(int fd, std::span<const std::uint8_t> bytes);
/// Returns nullopt on clean end of stream. Throws Error(io_error) or
/// Error(malformed_frame) for oversized messages.
std::optional<Bytes> read_message(int fd);

}  // namespace atlas::wire
