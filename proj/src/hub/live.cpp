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

#include "atlas/hub/live.hpp"

#include <algorithm>

#include "atlas/core/error.hpp"
#include "atlas/core/hash.hpp"
#include "atlas/core/text_io.hpp"
#include "atlas/sim/reference_walk.hpp"

namespace atlas::hub {
namespace {

constexpr std::size_t kChallengeBytes = 16;

wire::SecureFrame receive(wire::Channel& channel) {
  auto bytes = channel.receive();
  if (!bytes) fail(ErrorCode::io_error, "expected a frame on the channel");
  return wire::decode(*bytes);
}

}  // namespace

HubConfig hub_config_for(const sim::Scenario& scenario) {
  HubConfig c;
  c.cycle = scenario.cycle;
  c.fingerprint.kalman = scenario.kalman;
  c.retention_days = scenario.retention_days;
  c.psk = scenario.security.psk;
  return c;
}

std::vector<pipeline::ReferenceWalk> scenario_walk(const sim::Scenario& scenario) {
  if (scenario.layout == sim::SurveyLayout::area_centres)
    return sim::walk_points(scenario.environment, sim::area_centre_points(scenario.environment), scenario.dwell_s,
                            scenario.path_loss, scenario.seed);
  return sim::generate_reference_walk(scenario.environment, scenario.grid_spacing, scenario.dwell_s,
                                      scenario.path_loss, scenario.seed);
}

LiveSystem::LiveSystem(const sim::Scenario& scenario, std::shared_ptr<Hub> hub, std::shared_ptr<wire::Wiretap> tap)
    : hub_(std::move(hub)),
      tap_(std::move(tap)),
      world_(scenario.environment, scenario.devices, scenario.world_config()),
      radio_(tap_),
      uplink_(tap_) {
  if (!hub_->map_index()) fail(ErrorCode::not_ready, "live stage needs a fingerprint map; run setup first");
  const TimestampMs now = world_.now();
  const auto& security = scenario.security;

  for (const auto& b : scenario.environment.beacons) beacons_.push_back(BeaconNode{b.id, std::nullopt, {}});
  for (std::size_t b = 0; b < beacons_.size(); ++b) open_uplink(b);

  // The QR code is the only path the secret and salt take to a device.
  const std::string qr = wire::PairingSecret{security.pairing_secret, scenario.environment.id, now, security.salt}
                             .to_qr_payload();
  std::vector<wire::PairingBeacon> pairing_beacons;
  for (const auto& b : beacons_) pairing_beacons.emplace_back(b.id, security.pairing_secret);

  for (std::size_t d = 0; d < scenario.devices.size(); ++d) {
    const auto& device = scenario.devices[d];
    if (!device.paired) continue;
    const auto secret = wire::PairingSecret::from_qr_payload(qr);
    const auto hashed = hash_user_id(device.raw_id, secret.salt);
    device_of_[hashed] = d;
    for (std::size_t b = 0; b < beacons_.size(); ++b) {
      wire::PairingDevice pairing(secret);
      radio_.send(pairing.request());
      auto accepted = pairing_beacons[b].accept(receive(radio_), now);
      radio_.send(accepted.reply);
      auto device_end = pairing.complete(receive(radio_), now);

      // Device introduces itself by hashed id only, inside the session.
      radio_.send(wire::seal(device_end, wire::MsgType::control, hashed.bytes()));
      auto hello = wire::open(accepted.session, receive(radio_));
      if (hello.payload.size() != HashedUserId::Bytes{}.size())
        fail(ErrorCode::pairing_rejected, "device hello has the wrong size");
      HashedUserId::Bytes id{};
      std::copy(hello.payload.begin(), hello.payload.end(), id.begin());
      beacons_[b].link_of[HashedUserId(id)] = links_.size();
      links_.push_back(DeviceLink{std::move(device_end), std::move(accepted.session)});
    }
  }
}

void LiveSystem::open_uplink(std::size_t b) {
  const TimestampMs now = world_.now();
  wire::PskClient client(wire::node_id(beacons_[b].id), hub_->config().psk);
  uplink_.send(client.hello(now));
  uplink_.send(hub_->accept_uplink(receive(uplink_), now));
  beacons_[b].uplink = client.finish(receive(uplink_), now);
}

void LiveSystem::ping(std::size_t b, const HashedUserId& device) {
  auto it = beacons_[b].link_of.find(device);
  if (it == beacons_[b].link_of.end()) fail(ErrorCode::authentication_failure, "measured device is not paired");
  auto& link = links_[it->second];
  const auto challenge = wire::random_array<kChallengeBytes>();
  radio_.send(wire::seal(link.beacon, wire::MsgType::control, challenge));
  const auto received = wire::open(link.device, receive(radio_));
  radio_.send(wire::seal(link.device, wire::MsgType::control, received.payload));
  const auto echo = wire::open(link.beacon, receive(radio_));
  if (!std::equal(echo.payload.begin(), echo.payload.end(), challenge.begin(), challenge.end()))
    fail(ErrorCode::authentication_failure, "ping echo does not match the challenge");
  ++pings_;
}

CycleOutcome LiveSystem::run_cycle() {
  const TimestampMs start = world_.now();
  const TimestampMs end = start + world_.config().cycle.cycle_period_ms;
  world_.step(end);

  std::map<HashedUserId, TimestampMs> measured_at;
  for (std::size_t b = 0; b < beacons_.size(); ++b) {
    if (wire::rehandshake_due(*beacons_[b].uplink, start)) {
      open_uplink(b);
      ++rehandshakes_;
    }
    auto samples = world_.drain_outbound(b);
    for (const auto& s : samples) {
      ping(b, s.device);
      auto [pos, inserted] = measured_at.emplace(s.device, s.timestamp);
      if (!inserted) pos->second = std::min(pos->second, s.timestamp);
    }
    if (samples.empty()) continue;
    const std::string payload = text::write_samples(samples);
    uplink_.send(wire::seal(*beacons_[b].uplink, wire::MsgType::sample_batch, wire::as_bytes(payload)));
  }

  std::vector<wire::Bytes> frames;
  while (auto bytes = uplink_.receive()) frames.push_back(std::move(*bytes));

  CycleOutcome out;
  out.report = hub_->run_cycle(start, frames);
  for (const auto& r : out.report.records) {
    const auto d = device_of_.find(r.user);
    const auto t = measured_at.find(r.user);
    if (d == device_of_.end() || t == measured_at.end()) continue;
    const auto* area = world_.environment().area_at(world_.devices()[d->second].position_at(t->second));
    const std::string truth = area ? area->label : "";
    out.truth[r.user] = truth;
    if (truth == r.area) ++out.correct;
  }
  return out;
}

LiveSummary run_live(const sim::Scenario& scenario, std::shared_ptr<Hub> hub, std::size_t cycles,
                     std::shared_ptr<wire::Wiretap> tap) {
  LiveSystem live(scenario, hub, std::move(tap));
  LiveSummary summary;
  for (std::size_t i = 0; i < cycles; ++i) {
    auto outcome = live.run_cycle();
    ++summary.cycles;
    summary.records += outcome.report.records.size();
    summary.correct += outcome.correct;
    summary.dropped_batches += outcome.report.batches_dropped;
    summary.max_passive_ms = std::max(summary.max_passive_ms, outcome.report.passive_ms);
    summary.log.insert(summary.log.end(), outcome.report.records.begin(), outcome.report.records.end());
  }
  return summary;
}

}  // namespace atlas::hub
