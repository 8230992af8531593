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

// Location record storage.
//
// Writers append whole cycles; readers take snapshots. A snapshot is an
// immutable vector swapped in under a mutex, so a reader sees either all of
// a cycle's records or none of them.
//
// FileStore layout: a plain concatenation of encoded frames (msg_type
// location_report), each sealed at rest with the store key and holding one
// serialized record batch. Appends add one frame; pruning rewrites the file
// through a temporary and a rename.

#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "atlas/core/types.hpp"
#include "atlas/wire/session.hpp"

namespace atlas::hub {

using RecordSnapshot = std::shared_ptr<const std::vector<LocationRecord>>;

class LocationStore {
 public:
  virtual ~LocationStore() = default;

  /// Appends one batch atomically. Empty batches are a no-op.
  virtual void append(const std::vector<LocationRecord>& batch) = 0;
  /// Removes every record with timestamp < cutoff; returns how many.
  virtual std::size_t prune_before(TimestampMs cutoff) = 0;
  RecordSnapshot snapshot() const;

 protected:
  void publish(RecordSnapshot next);

  mutable std::mutex snapshot_mutex_;
  RecordSnapshot records_ = std::make_shared<const std::vector<LocationRecord>>();
};

class InMemoryStore final : public LocationStore {
 public:
  void append(const std::vector<LocationRecord>& batch) override;
  std::size_t prune_before(TimestampMs cutoff) override;

 private:
  std::mutex write_mutex_;
};

enum class AtRest { sealed, plaintext };

class FileStore final : public LocationStore {
 public:
  /// Loads an existing file or starts an empty one. Throws
  /// Error(authentication_failure) when a frame does not open under `key`.
  /// A torn final frame (interrupted append) is ignored and overwritten.
  FileStore(std::string path, const wire::Key32& key, AtRest mode = AtRest::sealed);

  void append(const std::vector<LocationRecord>& batch) override;
  std::size_t prune_before(TimestampMs cutoff) override;

  const std::string& path() const { return path_; }

 private:
  wire::Bytes encode_batch(const std::vector<LocationRecord>& batch) const;
  void rewrite(const std::vector<LocationRecord>& records);

  std::string path_;
  std::ofstream out_;  // opened on first append, closed by rewrite
  wire::Key32 key_{};
  AtRest mode_;
  std::mutex write_mutex_;
  std::size_t valid_bytes_ = 0;
};

/// Reads every record of a store file without keeping it open.
std::vector<LocationRecord> read_store_file(const std::string& path, const wire::Key32& key);

/// Concatenates stores that share one salt domain, ordered by (timestamp,
/// user, area) with exact duplicates removed.
std::vector<LocationRecord> merge_records(const std::vector<std::vector<LocationRecord>>& stores);

}  // namespace atlas::hub
