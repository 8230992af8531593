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

#include "atlas/wire/channel.hpp"

#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "atlas/core/error.hpp"

namespace atlas::wire {

void Wiretap::record(std::span<const std::uint8_t> bytes) {
  std::lock_guard lock(mutex_);
  captures_.emplace_back(bytes.begin(), bytes.end());
  total_ += bytes.size();
}

std::vector<Bytes> Wiretap::captures() const {
  std::lock_guard lock(mutex_);
  return captures_;
}

std::size_t Wiretap::frame_count() const {
  std::lock_guard lock(mutex_);
  return captures_.size();
}

std::size_t Wiretap::total_bytes() const {
  std::lock_guard lock(mutex_);
  return total_;
}

bool Wiretap::contains(std::span<const std::uint8_t> needle) const {
  if (needle.empty()) return true;
  std::lock_guard lock(mutex_);
  return std::any_of(captures_.begin(), captures_.end(), [&](const Bytes& c) {
    return std::search(c.begin(), c.end(), needle.begin(), needle.end()) != c.end();
  });
}

void Wiretap::clear() {
  std::lock_guard lock(mutex_);
  captures_.clear();
  total_ = 0;
}

void Channel::send(const SecureFrame& frame) { send_bytes(encode(frame)); }

void Channel::send_bytes(Bytes bytes) {
  if (tap_) tap_->record(bytes);
  std::lock_guard lock(mutex_);
  queue_.push_back(std::move(bytes));
}

std::optional<Bytes> Channel::receive() {
  std::lock_guard lock(mutex_);
  if (queue_.empty()) return std::nullopt;
  Bytes out = std::move(queue_.front());
  queue_.pop_front();
  return out;
}

std::size_t Channel::pending() const {
  std::lock_guard lock(mutex_);
  return queue_.size();
}

namespace {

void write_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t w = ::write(fd, data, n);
    if (w < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::io_error, std::string("write failed: ") + std::strerror(errno));
    }
    data += w;
    n -= static_cast<std::size_t>(w);
  }
}

// Returns the number of bytes read; short only at end of stream.
std::size_t read_all(int fd, std::uint8_t* data, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::read(fd, data + got, n - got);
    if (r < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::io_error, std::string("read failed: ") + std::strerror(errno));
    }
    if (r == 0) break;
    got += static_cast<std::size_t>(r);
  }
  return got;
}

}  // namespace

void write_message(int fd, std::span<const std::uint8_t> bytes) {
  if (bytes.size() > kMaxPayloadBytes + kFrameOverhead) fail(ErrorCode::invalid_input, "message too large");
  const auto n = static_cast<std::uint32_t>(bytes.size());
  const std::uint8_t len[4] = {static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                               static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
  write_all(fd, len, 4);
  write_all(fd, bytes.data(), bytes.size());
}

std::optional<Bytes> read_message(int fd) {
  std::uint8_t len[4];
  const std::size_t got = read_all(fd, len, 4);
  if (got == 0) return std::nullopt;
  if (got < 4) fail(ErrorCode::io_error, "truncated length prefix");
  const std::uint32_t n = (std::uint32_t{len[0]} << 24) | (std::uint32_t{len[1]} << 16) |
                          (std::uint32_t{len[2]} << 8) | std::uint32_t{len[3]};
  if (n > kMaxPayloadBytes + kFrameOverhead) fail(ErrorCode::malformed_frame, "message length exceeds limit");
  Bytes out(n);
  if (read_all(fd, out.data(), n) != n) fail(ErrorCode::io_error, "truncated message");
  return out;
}

}  // namespace atlas::wire
