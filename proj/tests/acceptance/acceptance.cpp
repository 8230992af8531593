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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <unistd.h>

#include "atlas/core/error.hpp"
#include "atlas/core/hash.hpp"
#include "atlas/core/text_io.hpp"
#include "atlas/hub/analysis.hpp"
#include "atlas/hub/bench.hpp"
#include "atlas/hub/hub.hpp"
#include "atlas/hub/live.hpp"
#include "atlas/hub/store.hpp"
#include "atlas/localizer/localizer.hpp"
#include "atlas/pipeline/pipeline.hpp"
#include "atlas/sim/scenario.hpp"
#include "atlas/sim/world.hpp"
#include "atlas/wire/channel.hpp"
#include "atlas/wire/handshake.hpp"

using namespace atlas;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

sim::Scenario scenario(const std::string& name) {
  return sim::load_scenario(std::string(ATLAS_SCENARIO_DIR) + "/" + name);
}

// Brute-force matcher: RMS over shared beacons, fewer than two shared means
// the candidate is skipped, smallest distance wins, ties to the smaller id.
struct OracleHit {
  std::string id;
  double distance = 0.0;
};

std::optional<OracleHit> oracle_match(const Fingerprint& user, const FingerprintMap& map) {
  std::optional<OracleHit> best;
  for (const auto& p : map.points) {
    double sum = 0.0;
    int shared = 0;
    for (const auto& [b, r] : user.entries()) {
      const auto& e = p.fingerprint.entries();
      auto it = e.find(b);
      if (it == e.end()) continue;
      sum += (r - it->second) * (r - it->second);
      ++shared;
    }
    if (shared < 2) continue;
    const double d = std::sqrt(sum / shared);
    if (!best || d < best->distance || (d == best->distance && p.id.str() < best->id)) best = OracleHit{p.id.str(), d};
  }
  return best;
}

FingerprintMap random_map(std::mt19937_64& rng, std::size_t points, std::size_t beacons) {
  std::uniform_real_distribution<double> rssi(-105, -35);
  FingerprintMap map;
  map.environment_id = "random";
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<std::pair<BeaconId, double>> e;
    for (std::size_t b = 0; b < beacons; ++b)
      if (rng() % 4 != 0) e.emplace_back(BeaconId::from_index(b + 1), std::round(rssi(rng) * 10) / 10);
    if (e.empty()) e.emplace_back(BeaconId::from_index(1 + rng() % beacons), -70.0);
    ReferencePointId id(pipeline::reference_point_name(i));
    map.points.push_back({id, {}, "area-" + std::to_string(i % 4), Fingerprint(e, 1, id)});
  }
  return map;
}

Fingerprint random_user(std::mt19937_64& rng, std::size_t beacons) {
  std::uniform_real_distribution<double> rssi(-105, -35);
  std::vector<std::pair<BeaconId, double>> e;
  for (std::size_t b = 0; b < beacons; ++b)
    if (rng() % 3 != 0) e.emplace_back(BeaconId::from_index(b + 1), std::round(rssi(rng) * 10) / 10);
  if (e.empty()) e.emplace_back(BeaconId::from_index(1), -60.0);
  return Fingerprint(e, 1, hash_user_id("user", std::vector<std::uint8_t>(16, 0)));
}

Outcome c1_matcher_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  int agree = 0, located = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const std::size_t beacons = 1 + rng() % 10;
    auto map = random_map(rng, 1 + rng() % 25, beacons);
    auto user = random_user(rng, beacons);
    auto want = oracle_match(user, map);
    auto got = localizer::localize(user, map);
    bool ok = want.has_value() == got.has_value();
    if (ok && got) {
      ok = got->best.reference_point.str() == want->id && std::abs(got->best.distance - want->distance) <= 1e-12;
      ++located;
    }
    agree += ok;
  }
  const double secs = seconds_since(t0);
  return {agree == n && secs < 10.0,
          fmt("%d/%d instances agree (%d located), %.2f s", agree, n, located, secs)};
}

Outcome c2_discard_rule() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> rssi(-100, -40);
  int ok = 0, decoys_chosen = 0, unlocatable = 0;
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    // The decoy shares a single beacon with the user at identical RSSI, so
    // it would be a perfect match if one shared beacon were enough.
    const double shared = std::round(rssi(rng) * 10) / 10;
    std::vector<std::pair<BeaconId, double>> user_e{{BeaconId::from_index(1), shared}};
    for (int b = 2; b <= 6; ++b) user_e.emplace_back(BeaconId::from_index(b), std::round(rssi(rng) * 10) / 10);
    Fingerprint user(user_e, 1, hash_user_id("u", std::vector<std::uint8_t>(16, 0)));

    FingerprintMap map;
    map.environment_id = "discard";
    ReferencePointId decoy("rp-000");
    map.points.push_back({decoy, {}, "decoy", Fingerprint(std::vector<std::pair<BeaconId, double>>{{BeaconId::from_index(1), shared},
                                                           {BeaconId::from_index(50), -60.0}}, 1, decoy)});
    const bool none_eligible = i % 10 == 0;
    const int others = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < others; ++k) {
      ReferencePointId id(pipeline::reference_point_name(static_cast<std::size_t>(k + 1)));
      std::vector<std::pair<BeaconId, double>> e;
      if (none_eligible) {
        e = {{BeaconId::from_index(2 + static_cast<std::uint64_t>(k % 5)), -70.0}, {BeaconId::from_index(60), -50.0}};
      } else {
        for (int b = 1; b <= 6; ++b)
          if (b <= 2 || rng() % 2) e.emplace_back(BeaconId::from_index(b), std::round(rssi(rng) * 10) / 10);
      }
      map.points.push_back({id, {}, "room", Fingerprint(e, 1, id)});
    }
    auto got = localizer::localize(user, map);
    auto want = oracle_match(user, map);
    if (got && got->best.reference_point == decoy) ++decoys_chosen;
    if (!got) ++unlocatable;
    const bool match = got.has_value() == want.has_value() && (!got || got->best.reference_point.str() == want->id);
    const bool expect_unlocatable = none_eligible ? !got.has_value() : got.has_value();
    ok += match && expect_unlocatable && !(got && got->best.reference_point == decoy);
  }
  return {ok == n && decoys_chosen == 0,
          fmt("%d/%d cases correct, single-beacon decoy chosen %d times, %d unlocatable (expected %d)", ok, n,
              decoys_chosen, unlocatable, n / 10)};
}

Outcome c3_beacon_count() {
  const auto t0 = Clock::now();
  std::vector<Position> positions;
  for (double y : {8.125, 9.75, 11.375})
    for (double x : {8.75, 10.5, 12.25}) positions.push_back({x, y, 0});
  double margin[4] = {};
  std::string detail;
  for (int beacons = 1; beacons <= 3; ++beacons) {
    auto s = scenario("four_rooms_b" + std::to_string(beacons) + ".yaml");
    const auto map = pipeline::build_fingerprint_map(hub::scenario_walk(s), s.environment);
    localizer::MatchIndex index(map);
    double total = 0.0;
    std::size_t trials = 0, correct = 0;
    for (std::size_t p = 0; p < positions.size(); ++p) {
      const auto study = hub::margin_study(s, index, positions[p], 200, 1000 * beacons + p);
      total += study.mean_margin * static_cast<double>(study.trials);
      trials += study.trials;
      correct += study.correct;
    }
    margin[beacons] = total / static_cast<double>(trials);
    detail += fmt("%d beacon%s: %.4f (top=B %zu/%zu)  ", beacons, beacons == 1 ? "" : "s", margin[beacons], correct,
                  trials);
  }
  const double secs = seconds_since(t0);
  detail += fmt("%.1f s", secs);
  return {margin[2] > margin[1] && margin[2] > margin[3] && secs < 60.0, detail};
}

Outcome c4_room_accuracy() {
  const auto t0 = Clock::now();
  auto s = scenario("walk.yaml");
  const std::size_t cycles = 1000;
  std::mt19937_64 rng(404);
  const auto& areas = s.environment.areas;
  sim::SimDevice walker{"walker-acceptance", {}, true};
  for (std::size_t k = 0; k < cycles; ++k) {
    const auto box = areas[rng() % areas.size()].bounding_box();
    std::uniform_real_distribution<double> ux(box.min_x + 0.5, box.max_x - 0.5), uy(box.min_y + 0.5, box.max_y - 0.5);
    const Position p{ux(rng), uy(rng), 0};
    const TimestampMs t = static_cast<TimestampMs>(k) * s.cycle.cycle_period_ms;
    walker.waypoints.push_back({t, p});
    walker.waypoints.push_back({t + s.cycle.cycle_period_ms - 1000, p});
  }
  s.devices = {walker};
  s.duration_s = static_cast<std::int64_t>(cycles) * s.cycle.cycle_period_ms / 1000;
  auto hub = std::make_shared<hub::Hub>(hub::hub_config_for(s), std::make_shared<hub::InMemoryStore>());
  hub->ingest_setup(hub::scenario_walk(s), s.environment);
  const auto summary = hub::run_live(s, hub, cycles);
  const double accuracy = static_cast<double>(summary.correct) / static_cast<double>(cycles);
  const double secs = seconds_since(t0);
  return {accuracy >= 0.95 && s.path_loss.noise_sigma == 2.0 && secs < 120.0,
          fmt("%zu/%zu cycles in the right room (%.2f%%), %zu records, sigma %.1f dB, %.1f s", summary.correct, cycles,
              100.0 * accuracy, summary.records, s.path_loss.noise_sigma, secs)};
}

Outcome c5_capacity() {
  Environment env;
  env.id = "capacity";
  env.bounds = {0, 0, 10, 10};
  env.areas = {Area::rectangle("hall", 0, {0, 0, 10, 10})};
  env.beacons = {{BeaconId::from_index(1), {5, 5, 0}}};
  auto cycle = [&](std::size_t n) {
    std::vector<sim::SimDevice> devices;
    for (std::size_t i = 0; i < n; ++i) devices.push_back({"dev-" + std::to_string(i), {{0, {4, 4, 0}}}, true});
    sim::World world(env, devices, sim::WorldConfig{});
    const auto trace = world.step(world.now() + world.config().cycle.cycle_period_ms);
    std::set<std::size_t> served;
    std::size_t deferred = 0;
    for (const auto& e : trace) {
      if (e.kind == sim::TraceKind::measurement) served.insert(e.device);
      if (e.kind == sim::TraceKind::deferral) ++deferred;
    }
    return std::tuple{served.size(), deferred, world.peak_connections(), world.overlapping_services()};
  };
  const auto [s40, d40, p40, o40] = cycle(40);
  const auto [s41, d41, p41, o41] = cycle(41);
  return {s40 == 40 && d40 == 0 && s41 == 40 && d41 == 1 && p40 <= 8 && p41 <= 8 && o40 == 0 && o41 == 0,
          fmt("40 devices: %zu served, %zu deferred; 41 devices: %zu served, %zu deferred; peak %zu connections",
              s40, d40, s41, d41, std::max(p40, p41))};
}

Outcome c6_multi_floor_log() {
  auto s = scenario("two_floors.yaml");
  auto hub = std::make_shared<hub::Hub>(hub::hub_config_for(s), std::make_shared<hub::InMemoryStore>());
  const auto map = hub->ingest_setup(hub::scenario_walk(s), s.environment);

  // A second world with the same configuration replays the exact samples
  // the beacons measured, so the hub's choices can be checked one by one.
  sim::World replay(s.environment, s.devices, s.world_config());
  hub::LiveSystem live(s, hub);
  const std::size_t cycles = static_cast<std::size_t>(s.duration_s * 1000 / s.cycle.cycle_period_ms);
  std::size_t records = 0, oracle_agree = 0, truth_agree = 0;
  pipeline::FingerprintOptions options;
  options.kalman = s.kalman;
  for (std::size_t c = 0; c < cycles; ++c) {
    const TimestampMs start = replay.now();
    const auto outcome = live.run_cycle();
    replay.step(start + s.cycle.cycle_period_ms);
    pipeline::SampleWindow window{replay.drain_all_outbound(), start, start + s.cycle.cycle_period_ms};
    for (const auto& r : outcome.report.records) {
      ++records;
      const auto fp = pipeline::build_fingerprint(window, r.user, options);
      const auto want = oracle_match(fp, map);
      if (want && map.find(ReferencePointId(want->id))->area == r.area && want->id == r.reference_point.str())
        ++oracle_agree;
    }
    truth_agree += outcome.correct;
  }

  const auto log = *hub->store().snapshot();
  std::set<HashedUserId> users;
  for (const auto& r : log) users.insert(r.user);
  std::size_t join_ok = 0;
  for (const auto& u : users) {
    std::map<std::pair<HashedUserId, std::string>, std::set<TimestampMs>> want;
    for (const auto& a : log)
      if (a.user == u)
        for (const auto& b : log)
          if (b.user != u && b.area == a.area && b.timestamp == a.timestamp) want[{b.user, b.area}].insert(a.timestamp);
    const auto got = hub->contact_trace(u, std::numeric_limits<TimestampMs>::min(), std::numeric_limits<TimestampMs>::max());
    bool same = got.size() == want.size();
    for (const auto& c : got) {
      auto it = want.find({c.other, c.area});
      same = same && it != want.end() && std::set<TimestampMs>(c.timestamps.begin(), c.timestamps.end()) == it->second;
    }
    join_ok += same;
  }
  return {records == 16 && oracle_agree == 16 && join_ok == users.size() && !users.empty(),
          fmt("%zu records over %zu cycles, %zu/%zu match the exhaustive matcher, %zu/%zu match ground truth, "
              "contact join agrees for %zu/%zu users",
              records, cycles, oracle_agree, records, truth_agree, records, join_ok, users.size())};
}

Outcome c7_wire() {
  const auto t0 = Clock::now();
  auto tap = std::make_shared<wire::Wiretap>();
  wire::Channel channel(tap);
  wire::PskClient client(wire::NodeId{'b', 'e', 'a', 'c', 'o', 'n'}, wire::Key32{42});
  wire::PskServer server(wire::NodeId{'h', 'u', 'b'}, wire::Key32{42});
  auto sessions = wire::psk_session(client, server, 1);

  const auto salt = std::vector<std::uint8_t>(16, 9);
  std::size_t round_trips = 0;
  std::vector<wire::Bytes> sent;
  std::vector<std::string> plaintexts;
  for (int i = 0; i < 10000; ++i) {
    const auto device = hash_user_id("phone-" + std::to_string(i % 50), salt);
    const auto payload = text::write_samples(
        {RssiSample::make(BeaconId::from_index(1 + i % 7), device, -40.0 - (i % 600) / 10.0, 1000 + i)});
    channel.send(wire::seal(sessions.client, wire::MsgType::sample_batch, wire::as_bytes(payload)));
    const auto bytes = *channel.receive();
    const auto opened = wire::open_bytes(sessions.server, bytes);
    round_trips += std::string(opened.payload.begin(), opened.payload.end()) == payload;
    if (i % 100 == 0) {
      sent.push_back(bytes);
      plaintexts.push_back(payload);
    }
  }

  // Every single-bit flip of a sample of frames must be rejected.
  std::size_t flips = 0, flips_rejected = 0;
  for (std::size_t f = 0; f < 5; ++f) {
    auto frame = wire::seal(sessions.client, wire::MsgType::sample_batch, wire::as_bytes(plaintexts[f]));
    const auto bytes = wire::encode(frame);
    for (std::size_t bit = 0; bit < bytes.size() * 8; ++bit) {
      auto copy = bytes;
      copy[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      auto rx = sessions.server;
      ++flips;
      try {
        wire::open_bytes(rx, copy);
      } catch (const Error&) {
        ++flips_rejected;
      }
    }
    wire::open_bytes(sessions.server, bytes);
  }

  std::size_t replays_rejected = 0;
  for (const auto& bytes : sent) {
    try {
      wire::open_bytes(sessions.server, bytes);
    } catch (const Error& e) {
      replays_rejected += e.code() == ErrorCode::replay_detected;
    }
  }

  // Full live stage on the tapped channels.
  auto s = scenario("two_floors.yaml");
  auto hub = std::make_shared<hub::Hub>(hub::hub_config_for(s), std::make_shared<hub::InMemoryStore>());
  hub->ingest_setup(hub::scenario_walk(s), s.environment);
  const auto summary = hub::run_live(s, hub, 4, tap);

  std::size_t leaks = 0;
  for (const auto& p : plaintexts) leaks += tap->contains(wire::as_bytes(p));
  for (const auto& needle : {std::string("samples:"), std::string("device:"), std::string("records:")})
    leaks += tap->contains(wire::as_bytes(needle));
  for (const auto& d : s.devices) {
    const auto hashed = hash_user_id(d.raw_id, s.security.salt);
    leaks += tap->contains(wire::as_bytes(d.raw_id));
    leaks += tap->contains(wire::as_bytes(hashed.to_hex()));
    leaks += tap->contains(hashed.bytes());
  }
  leaks += tap->contains(s.security.pairing_secret) + tap->contains(s.security.psk);

  const double secs = seconds_since(t0);
  return {round_trips == 10000 && flips_rejected == flips && replays_rejected == sent.size() && leaks == 0 &&
              summary.records == 16 && secs < 30.0,
          fmt("%zu/10000 round trips, %zu/%zu bit flips rejected, %zu/%zu replays rejected, %zu frames tapped with "
              "%zu plaintext hits, %.1f s",
              round_trips, flips_rejected, flips, replays_rejected, sent.size(), tap->frame_count(), leaks, secs)};
}

Outcome c8_bench() {
  auto s = scenario("two_floors.yaml");
  const auto map = pipeline::build_fingerprint_map(hub::scenario_walk(s), s.environment);
  const auto report = hub::run_bench(s, map, 100, fs::temp_directory_path().string());
  std::string detail;
  for (const auto& r : report.rows)
    detail += fmt("%s %.4f/%.4f ms; ", r.name.c_str(), r.encrypted_ms, r.plaintext_ms);
  detail += fmt("cycle %lld ms", static_cast<long long>(report.cycle_period_ms));
  return {report.rows.size() == 3 && report.encrypted_slower_everywhere() && report.within_cycle(), detail};
}

Outcome c9_retention() {
  const auto dir = fs::temp_directory_path() / ("atlas-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto path = (dir / "store.atlas").string();
  const wire::Key32 key{7};
  const TimestampMs now = 400 * hub::kDayMs;
  const TimestampMs edge = now - 28 * hub::kDayMs;
  const auto who = hash_user_id("retained", std::vector<std::uint8_t>(16, 3));
  bool edge_kept = false, idempotent = false, persisted = false;
  std::size_t first = 0, second = 0;
  {
    auto store = std::make_shared<hub::FileStore>(path, key);
    hub::Hub hub(hub::HubConfig{}, store);
    store->append({{who, "a", ReferencePointId("rp-000"), 0.5, edge - 1},
                   {who, "a", ReferencePointId("rp-000"), 0.5, edge},
                   {who, "b", ReferencePointId("rp-001"), 0.5, now}});
    first = hub.prune_retention(now);
    const auto bytes = text::read_file(path);
    second = hub.prune_retention(now);
    idempotent = second == 0 && text::read_file(path) == bytes;
    const auto left = hub.track(who, 0, now);
    edge_kept = left.size() == 2 && left.front().timestamp == edge;
  }
  const auto reread = hub::read_store_file(path, key);
  persisted = reread.size() == 2 && reread.front().timestamp == edge;
  fs::remove_all(dir);
  return {first == 1 && edge_kept && idempotent && persisted,
          fmt("first prune removed %zu, second removed %zu, record exactly 28 days old %s, file %s", first, second,
              edge_kept ? "kept" : "lost", persisted ? "consistent" : "inconsistent")};
}

double variance(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size());
}

Outcome c10_kalman() {
  const pipeline::KalmanParams params;
  bool fixed = true;
  for (double c : {-110.0, -87.3, -60.0, -35.5, 0.0}) {
    const std::vector<double> in(1000, c);
    for (double v : pipeline::kalman_filter(in, params)) fixed = fixed && v == c;
  }
  double worst_shift = 0.0;
  int reduced = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::normal_distribution<double> noise(-70.0, 2.0);
    std::vector<double> in(120);
    for (auto& x : in) x = noise(rng);
    const auto out = pipeline::kalman_filter(in, params);
    if (variance(out) < variance(in)) ++reduced;
    const double shift = std::uniform_real_distribution<double>(-30, 30)(rng);
    std::vector<double> moved(in);
    for (auto& x : moved) x += shift;
    const auto out2 = pipeline::kalman_filter(moved, params);
    for (std::size_t i = 0; i < out.size(); ++i) worst_shift = std::max(worst_shift, std::abs(out2[i] - out[i] - shift));
  }
  return {fixed && worst_shift <= 1e-9 && reduced >= 99,
          fmt("constant streams %s, worst shift error %.2e, variance reduced in %d/100 seeds",
              fixed ? "exact" : "drift", worst_shift, reduced)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"matcher agrees with brute force on 1000 random maps", c1_matcher_oracle},
      {"candidates sharing fewer than two beacons are discarded", c2_discard_rule},
      {"two beacons in room B give the widest area margin", c3_beacon_count},
      {"room-level accuracy over 1000 live cycles", c4_room_accuracy},
      {"40 devices served per beacon cycle, the 41st deferred", c5_capacity},
      {"two-floor log and contact trace", c6_multi_floor_log},
      {"secure frames: integrity, replay and confidentiality", c7_wire},
      {"encrypted versus plaintext latency", c8_bench},
      {"28-day retention boundary", c9_retention},
      {"Kalman smoother invariants", c10_kalman},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
