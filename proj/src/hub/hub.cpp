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

#include "atlas/hub/hub.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <tuple>

#include "atlas/core/error.hpp"
#include "atlas/core/text_io.hpp"

namespace atlas::hub {

std::string_view to_string(HubMode mode) { return mode == HubMode::setup ? "setup" : "live"; }

Hub::Hub(HubConfig config, std::shared_ptr<LocationStore> store)
    : config_(std::move(config)), store_(std::move(store)), psk_server_(config_.id, config_.psk) {
  config_.cycle.validate();
  config_.fingerprint.kalman.validate();
  if (config_.retention_days <= 0) fail(ErrorCode::invalid_input, "retention_days must be positive");
  if (!store_) fail(ErrorCode::invalid_input, "hub needs a store");
}

FingerprintMap Hub::ingest_setup(std::span<const pipeline::ReferenceWalk> walks, const Environment& env) {
  if (walks.empty()) fail(ErrorCode::setup_failed, "setup produced no reference walks");
  FingerprintMap map;
  try {
    map = pipeline::build_fingerprint_map(walks, env, config_.fingerprint);
  } catch (const Error& e) {
    fail(ErrorCode::setup_failed, std::string("building the fingerprint map failed: ") + e.what());
  }
  if (!config_.map_path.empty()) text::write_file(config_.map_path, text::write_fingerprint_map(map));
  load_map(map);
  return map;
}

void Hub::load_map(FingerprintMap map) {
  if (map.points.empty()) fail(ErrorCode::setup_failed, "fingerprint map has no points");
  map.validate();
  auto index = std::make_shared<const localizer::MatchIndex>(map);
  std::lock_guard lock(map_mutex_);
  index_ = std::move(index);
}

std::shared_ptr<const localizer::MatchIndex> Hub::map_index() const {
  std::lock_guard lock(map_mutex_);
  return index_;
}

wire::SecureFrame Hub::accept_uplink(const wire::SecureFrame& hello, TimestampMs now) {
  std::lock_guard lock(writer_mutex_);
  auto accepted = psk_server_.accept(hello, now);
  uplinks_.insert_or_assign(hello.sender_id, std::move(accepted.session));
  uplink_count_ = uplinks_.size();
  return accepted.reply;
}

void Hub::install_uplink(wire::SessionKeys session) {
  if (session.protection() == wire::Protection::plaintext && !config_.allow_plaintext)
    fail(ErrorCode::plaintext_refused, "plaintext sessions are only accepted by the overhead benchmark");
  std::lock_guard lock(writer_mutex_);
  const auto peer = session.peer_id();
  uplinks_.insert_or_assign(peer, std::move(session));
  uplink_count_ = uplinks_.size();
}

CycleReport Hub::run_cycle(TimestampMs cycle_start, const std::vector<wire::Bytes>& frames) {
  if (!map_index()) fail(ErrorCode::not_ready, "no fingerprint map loaded; run setup first");
  CycleReport report;
  std::vector<RssiSample> samples;
  {
    std::lock_guard lock(writer_mutex_);
    // Active phase: every batch is opened before any processing starts.
    for (const auto& bytes : frames) {
      try {
        const auto frame = wire::decode(bytes);
        auto it = uplinks_.find(frame.sender_id);
        if (it == uplinks_.end()) fail(ErrorCode::authentication_failure, "frame from unknown beacon");
        const auto opened = wire::open(it->second, frame);
        if (opened.msg_type != wire::MsgType::sample_batch)
          fail(ErrorCode::malformed_frame, "expected a sample batch");
        auto batch = text::read_samples(
            std::string_view(reinterpret_cast<const char*>(opened.payload.data()), opened.payload.size()));
        samples.insert(samples.end(), batch.begin(), batch.end());
        ++report.batches_accepted;
      } catch (const Error&) {
        ++report.batches_dropped;
      }
    }
  }
  dropped_ += report.batches_dropped;
  return process(cycle_start, std::move(samples), std::move(report));
}

CycleReport Hub::run_cycle_samples(TimestampMs cycle_start, const std::vector<RssiSample>& samples) {
  if (!map_index()) fail(ErrorCode::not_ready, "no fingerprint map loaded; run setup first");
  return process(cycle_start, samples, CycleReport{});
}

CycleReport Hub::process(TimestampMs cycle_start, std::vector<RssiSample> samples, CycleReport report) {
  const auto started = std::chrono::steady_clock::now();
  const auto index = map_index();
  report.cycle_start = cycle_start;
  report.cycle_end = cycle_start + config_.cycle.cycle_period_ms;

  pipeline::SampleWindow window{{}, report.cycle_start, report.cycle_end};
  std::set<HashedUserId> users;
  for (auto& s : samples) {
    if (s.timestamp < window.start || s.timestamp >= window.end) {
      ++report.samples_outside_window;
      continue;
    }
    users.insert(s.device);
    window.samples.push_back(std::move(s));
  }
  report.samples = window.samples.size();
  report.users = users.size();

  std::vector<Fingerprint> fingerprints;
  fingerprints.reserve(users.size());
  for (const auto& u : users) {
    try {
      fingerprints.push_back(pipeline::build_fingerprint(window, u, config_.fingerprint));
    } catch (const Error&) {
      ++report.unlocatable;
    }
  }
  auto batch = localizer::localize_batch(fingerprints, *index, config_.localize);
  report.unlocatable += batch.unlocatable.size();
  for (auto& [user, record] : batch.located) {
    record.timestamp = report.cycle_end;
    report.records.push_back(record);
  }

  std::lock_guard lock(writer_mutex_);
  store_->append(report.records);
  report.passive_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  ++cycles_;
  last_cycle_end_ = report.cycle_end;
  last_passive_ms_ = report.passive_ms;
  return report;
}

std::vector<LocationRecord> Hub::track(const HashedUserId& user, TimestampMs from, TimestampMs to) const {
  if (from > to) fail(ErrorCode::invalid_input, "track window has from > to");
  const auto snap = store_->snapshot();
  std::vector<LocationRecord> out;
  for (const auto& r : *snap)
    if (r.user == user && r.timestamp >= from && r.timestamp <= to) out.push_back(r);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return out;
}

std::vector<ContactEntry> contacts_in(const std::vector<LocationRecord>& records, const HashedUserId& user,
                                      TimestampMs from, TimestampMs to) {
  if (from > to) fail(ErrorCode::invalid_input, "contact window has from > to");
  std::set<std::pair<std::string, TimestampMs>> visits;
  for (const auto& r : records)
    if (r.user == user && r.timestamp >= from && r.timestamp <= to) visits.emplace(r.area, r.timestamp);

  std::map<std::pair<HashedUserId, std::string>, std::set<TimestampMs>> shared;
  for (const auto& r : records) {
    if (r.user == user || !visits.contains({r.area, r.timestamp})) continue;
    shared[{r.user, r.area}].insert(r.timestamp);
  }
  std::vector<ContactEntry> out;
  for (const auto& [key, times] : shared)
    out.push_back(ContactEntry{key.first, key.second, std::vector<TimestampMs>(times.begin(), times.end())});
  return out;
}

std::vector<ContactEntry> Hub::contact_trace(const HashedUserId& user, TimestampMs from, TimestampMs to) const {
  return contacts_in(*store_->snapshot(), user, from, to);
}

std::size_t Hub::prune_retention(TimestampMs now) {
  std::lock_guard lock(writer_mutex_);
  return store_->prune_before(now - config_.retention_days * kDayMs);
}

HubStatus Hub::status() const {
  HubStatus s;
  const auto index = map_index();
  s.mode = index ? HubMode::live : HubMode::setup;
  s.map_points = index ? index->size() : 0;
  s.records = store_->snapshot()->size();
  s.cycles = cycles_;
  s.dropped_batches = dropped_;
  s.last_cycle_end = last_cycle_end_;
  s.last_passive_ms = last_passive_ms_;
  s.uplinks = uplink_count_;
  return s;
}

}  // namespace atlas::hub
