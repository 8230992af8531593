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

#include "atlas/hub/store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <tuple>

#include "atlas/core/error.hpp"
#include "atlas/core/text_io.hpp"

namespace atlas::hub {
namespace {

const wire::NodeId kStoreWriter = {'a', 't', 'l', 'a', 's', '-', 's', 't', 'o', 'r', 'e', 0, 0, 0, 0, 1};

wire::Bytes slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return wire::Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct Loaded {
  std::vector<LocationRecord> records;
  std::size_t valid_bytes = 0;
};

Loaded load_frames(const wire::Bytes& bytes, const wire::Key32& key, AtRest mode) {
  Loaded out;
  std::size_t at = 0;
  while (at < bytes.size()) {
    const auto rest = std::span(bytes).subspan(at);
    const auto size = wire::encoded_size(rest);
    if (!size || *size > rest.size()) break;  // torn tail
    const auto frame = wire::decode(rest.first(*size));
    wire::Bytes payload;
    if (mode == AtRest::plaintext && frame.tag == wire::Tag16{}) {
      payload = frame.ciphertext;
    } else {
      payload = wire::open_at_rest(key, frame);
    }
    auto batch = text::read_records(std::string_view(reinterpret_cast<const char*>(payload.data()), payload.size()));
    out.records.insert(out.records.end(), batch.begin(), batch.end());
    at += *size;
  }
  out.valid_bytes = at;
  return out;
}

void write_bytes(const std::string& path, const wire::Bytes& bytes, std::ios::openmode mode) {
  std::ofstream out(path, std::ios::binary | mode);
  if (!out) fail(ErrorCode::io_error, "cannot open store file " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) fail(ErrorCode::io_error, "write to store file " + path + " failed");
}

}  // namespace

RecordSnapshot LocationStore::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return records_;
}

void LocationStore::publish(RecordSnapshot next) {
  std::lock_guard lock(snapshot_mutex_);
  records_ = std::move(next);
}

void InMemoryStore::append(const std::vector<LocationRecord>& batch) {
  if (batch.empty()) return;
  std::lock_guard lock(write_mutex_);
  auto next = std::make_shared<std::vector<LocationRecord>>(*snapshot());
  next->insert(next->end(), batch.begin(), batch.end());
  publish(std::move(next));
}

std::size_t InMemoryStore::prune_before(TimestampMs cutoff) {
  std::lock_guard lock(write_mutex_);
  auto next = std::make_shared<std::vector<LocationRecord>>(*snapshot());
  const auto removed = std::erase_if(*next, [&](const LocationRecord& r) { return r.timestamp < cutoff; });
  if (removed > 0) publish(std::move(next));
  return removed;
}

FileStore::FileStore(std::string path, const wire::Key32& key, AtRest mode)
    : path_(std::move(path)), key_(key), mode_(mode) {
  const auto bytes = slurp(path_);
  auto loaded = load_frames(bytes, key_, mode_);
  valid_bytes_ = loaded.valid_bytes;
  if (valid_bytes_ != bytes.size()) std::filesystem::resize_file(path_, valid_bytes_);
  publish(std::make_shared<const std::vector<LocationRecord>>(std::move(loaded.records)));
}

wire::Bytes FileStore::encode_batch(const std::vector<LocationRecord>& batch) const {
  const std::string text = text::write_records(batch);
  const auto payload = wire::as_bytes(text);
#ifdef ATLAS_PLAINTEXT_BENCH
  if (mode_ == AtRest::plaintext)
    return wire::encode(wire::plaintext_at_rest(kStoreWriter, wire::MsgType::location_report, payload));
#endif
  return wire::encode(wire::seal_at_rest(key_, kStoreWriter, wire::MsgType::location_report, payload));
}

void FileStore::append(const std::vector<LocationRecord>& batch) {
  if (batch.empty()) return;
  std::lock_guard lock(write_mutex_);
  const auto bytes = encode_batch(batch);
  if (!out_.is_open()) {
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) fail(ErrorCode::io_error, "cannot open store file " + path_);
  }
  out_.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out_.flush();
  if (!out_) {
    out_.close();
    fail(ErrorCode::io_error, "write to store file " + path_ + " failed");
  }
  valid_bytes_ += bytes.size();
  auto next = std::make_shared<std::vector<LocationRecord>>(*snapshot());
  next->insert(next->end(), batch.begin(), batch.end());
  publish(std::move(next));
}

void FileStore::rewrite(const std::vector<LocationRecord>& records) {
  out_.close();
  const std::string tmp = path_ + ".tmp";
  const auto bytes = records.empty() ? wire::Bytes{} : encode_batch(records);
  write_bytes(tmp, bytes, std::ios::trunc);
  std::filesystem::rename(tmp, path_);
  valid_bytes_ = bytes.size();
}

std::size_t FileStore::prune_before(TimestampMs cutoff) {
  std::lock_guard lock(write_mutex_);
  auto next = std::make_shared<std::vector<LocationRecord>>(*snapshot());
  const auto removed = std::erase_if(*next, [&](const LocationRecord& r) { return r.timestamp < cutoff; });
  if (removed == 0) return 0;
  rewrite(*next);
  publish(std::move(next));
  return removed;
}

std::vector<LocationRecord> read_store_file(const std::string& path, const wire::Key32& key) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::io_error, "store file not found: " + path);
  return load_frames(slurp(path), key, AtRest::sealed).records;
}

std::vector<LocationRecord> merge_records(const std::vector<std::vector<LocationRecord>>& stores) {
  std::vector<LocationRecord> out;
  for (const auto& s : stores) out.insert(out.end(), s.begin(), s.end());
  auto key = [](const LocationRecord& r) {
    return std::tie(r.timestamp, r.user, r.area, r.reference_point.str(), r.confidence);
  };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace atlas::hub
