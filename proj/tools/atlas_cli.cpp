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

// atlas: setup walks, live runs, queries and benchmarks over scenario files.
//
// Exit codes: 0 success, 1 usage, 2 validation, 3 runtime.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atlas/core/error.hpp"
#include "atlas/core/text_io.hpp"
#include "atlas/hub/analysis.hpp"
#include "atlas/hub/api.hpp"
#include "atlas/hub/hub.hpp"
#include "atlas/hub/live.hpp"
#include "atlas/hub/store.hpp"
#include "atlas/sim/scenario.hpp"

#ifdef ATLAS_PLAINTEXT_BENCH
#include "atlas/hub/bench.hpp"
#endif

namespace {

using namespace atlas;

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

// Failure tagged with the stage that raised it.
struct StageError {
  std::string stage;
  ErrorCode code;
  std::string message;
};

template <typename F>
auto stage(const std::string& name, F&& work) -> decltype(work()) {
  try {
    return work();
  } catch (const Error& e) {
    throw StageError{name, e.code(), e.what()};
  } catch (const std::filesystem::filesystem_error& e) {
    throw StageError{name, ErrorCode::io_error, e.what()};
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input:
    case ErrorCode::parse_error:
    case ErrorCode::validation_error:
    case ErrorCode::unknown_beacon:
    case ErrorCode::plaintext_refused:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> duration;
  std::string map;
  std::string store;
  std::vector<std::string> stores;
  std::optional<double> grid_spacing;
  std::optional<int> dwell;
  bool plaintext = false;
  std::string out;
  std::string key;
  std::string user;
  std::optional<TimestampMs> from;
  std::optional<TimestampMs> to;
  std::vector<std::string> at;
  int repetitions = 100;
};

sim::Scenario load(const Options& o) {
  auto s = stage("load scenario", [&] { return sim::load_scenario(o.scenario); });
  if (o.seed) s.seed = *o.seed;
  if (o.duration) {
    if (*o.duration < 0) throw StageError{"load scenario", ErrorCode::invalid_input, "--duration must be >= 0"};
    s.duration_s = *o.duration;
  }
  if (o.grid_spacing) s.grid_spacing = *o.grid_spacing;
  if (o.dwell) s.dwell_s = *o.dwell;
  return s;
}

FingerprintMap load_map(const std::string& path) {
  return stage("load map", [&] { return text::read_fingerprint_map(text::read_file(path)); });
}

wire::Key32 store_key(const Options& o) {
  if (!o.key.empty()) {
    return stage("parse key", [&] {
      const auto raw = from_hex_string(o.key);
      if (raw.size() != 32) fail(ErrorCode::invalid_input, "--key must be 64 hex characters");
      wire::Key32 k{};
      std::copy(raw.begin(), raw.end(), k.begin());
      return k;
    });
  }
  if (!o.scenario.empty()) return load(o).security.store_key;
  throw StageError{"parse key", ErrorCode::invalid_input, "need --key or --scenario to open a store"};
}

std::string short_id(const HashedUserId& id) { return id.to_hex().substr(0, 12); }

// Per-area count of reference points and of distinct beacons heard there.
void print_visibility(const Environment& env, const FingerprintMap& map) {
  std::map<std::string, std::pair<std::size_t, std::set<BeaconId>>> per_area;
  for (const auto& a : env.areas) per_area[a.label];
  for (const auto& p : map.points) {
    auto& [count, beacons] = per_area[p.area];
    ++count;
    for (const auto& [b, rssi] : p.fingerprint.entries()) beacons.insert(b);
  }
  std::printf("%-16s %8s %8s\n", "area", "points", "beacons");
  for (const auto& [area, v] : per_area) std::printf("%-16s %8zu %8zu\n", area.c_str(), v.first, v.second.size());
}

int cmd_setup(const Options& o) {
  const auto scenario = load(o);
  const auto walks = stage("reference walk", [&] { return hub::scenario_walk(scenario); });
  auto config = hub::hub_config_for(scenario);
  hub::Hub hub(config, std::make_shared<hub::InMemoryStore>());
  const auto map = stage("build map", [&] { return hub.ingest_setup(walks, scenario.environment); });
  stage("write map", [&] { text::write_file(o.out, text::write_fingerprint_map(map)); });
  std::printf("map: %s\npoints: %zu\n", o.out.c_str(), map.points.size());
  print_visibility(scenario.environment, map);
  return 0;
}

int cmd_run(const Options& o) {
  if (o.plaintext)
    throw StageError{"run", ErrorCode::plaintext_refused, "plaintext frames are only available to 'atlas bench'"};
  const auto scenario = load(o);
  const auto map = load_map(o.map);
  if (map.environment_id != scenario.environment.id)
    throw StageError{"load map", ErrorCode::validation_error,
                     "map belongs to environment '" + map.environment_id + "', scenario is '" +
                         scenario.environment.id + "'"};

  std::shared_ptr<hub::LocationStore> store;
  if (o.store.empty())
    store = std::make_shared<hub::InMemoryStore>();
  else
    store = stage("open store", [&] {
      return std::make_shared<hub::FileStore>(o.store, scenario.security.store_key);
    });
  auto hub = std::make_shared<hub::Hub>(hub::hub_config_for(scenario), store);
  stage("load map", [&] { hub->load_map(map); });

  const auto cycles = static_cast<std::size_t>(scenario.duration_s * 1000 / scenario.cycle.cycle_period_ms);
  const auto summary = stage("live", [&] { return hub::run_live(scenario, hub, cycles); });
  if (!o.out.empty()) stage("write log", [&] { text::write_file(o.out, text::write_records(summary.log)); });

  std::map<HashedUserId, std::vector<std::string>> trajectories;
  for (const auto& r : summary.log) trajectories[r.user].push_back(r.area);
  std::printf("cycles: %zu\nrecords: %zu\n", summary.cycles, summary.records);
  for (const auto& [user, areas] : trajectories) {
    std::string line;
    for (const auto& a : areas) line += (line.empty() ? "" : " ") + a;
    std::printf("user %s: %s\n", short_id(user).c_str(), line.c_str());
  }
  if (summary.records > 0)
    std::printf("accuracy: %.4f (%zu/%zu)\n", summary.accuracy(), summary.correct, summary.records);
  std::printf("max_passive_ms: %.3f\n", summary.max_passive_ms);
  return 0;
}

int cmd_trace(const Options& o) {
  const auto key = store_key(o);
  const auto user = stage("parse user", [&] { return HashedUserId::parse_hex(o.user); });
  const auto records = stage("open store", [&] { return hub::read_store_file(o.store, key); });
  const auto contacts = stage("contact trace", [&] {
    return hub::contacts_in(records, user, o.from.value_or(std::numeric_limits<TimestampMs>::min()),
                            o.to.value_or(std::numeric_limits<TimestampMs>::max()));
  });
  std::printf("%-64s %-16s %14s %14s %6s\n", "user", "area", "first", "last", "cycles");
  for (const auto& c : contacts)
    std::printf("%-64s %-16s %14lld %14lld %6zu\n", c.other.to_hex().c_str(), c.area.c_str(),
                static_cast<long long>(c.first()), static_cast<long long>(c.last()), c.timestamps.size());
  return 0;
}

int cmd_bench(const Options& o) {
#ifdef ATLAS_PLAINTEXT_BENCH
  if (!o.plaintext)
    throw StageError{"bench", ErrorCode::invalid_input, "bench compares against plaintext frames; pass --plaintext"};
  const auto scenario = load(o);
  FingerprintMap map;
  if (!o.map.empty()) {
    map = load_map(o.map);
  } else {
    const auto walks = stage("reference walk", [&] { return hub::scenario_walk(scenario); });
    pipeline::FingerprintOptions options;
    options.kalman = scenario.kalman;
    map = stage("build map", [&] { return pipeline::build_fingerprint_map(walks, scenario.environment, options); });
  }
  const auto scratch = std::filesystem::temp_directory_path().string();
  const auto report = stage("bench", [&] { return hub::run_bench(scenario, map, o.repetitions, scratch); });
  std::fputs(hub::format_bench(report).c_str(), stdout);
  std::printf("encrypted_slower_on_all_rows: %s\n", report.encrypted_slower_everywhere() ? "yes" : "no");
  std::printf("within_cycle_%lldms: %s\n", static_cast<long long>(report.cycle_period_ms),
              report.within_cycle() ? "yes" : "no");
  return 0;
#else
  (void)o;
  throw StageError{"bench", ErrorCode::plaintext_refused, "built without the plaintext benchmark mode"};
#endif
}

Position parse_position(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::invalid_input, "--at expects x,y[,floor], got '" + text + "'");
    }
  }
  if (parts.size() < 2 || parts.size() > 3) fail(ErrorCode::invalid_input, "--at expects x,y[,floor]");
  return Position{parts[0], parts[1], parts.size() == 3 ? static_cast<int>(parts[2]) : 0};
}

int cmd_weights(const Options& o) {
  const auto scenario = load(o);
  const auto map = load_map(o.map);
  std::vector<Position> positions;
  stage("parse positions", [&] {
    for (const auto& a : o.at) positions.push_back(parse_position(a));
  });
  if (positions.empty())
    for (const auto& a : scenario.environment.areas) {
      const auto c = a.centroid();
      positions.push_back(Position{c.x, c.y, a.floor});
    }
  const localizer::MatchIndex index(map);
  const auto table = stage("weights", [&] { return hub::weight_table(scenario, index, positions, scenario.seed); });

  std::vector<std::string> areas;
  for (const auto& a : scenario.environment.areas) areas.push_back(a.label);
  std::printf("%-18s %-10s", "position", "true");
  for (const auto& a : areas) std::printf(" %10s", a.c_str());
  std::printf(" %-10s %8s\n", "top", "margin");
  for (const auto& row : table) {
    char pos[64];
    std::snprintf(pos, sizeof pos, "(%.2f,%.2f,%d)", row.position.x, row.position.y, row.position.floor);
    std::printf("%-18s %-10s", pos, row.true_area.c_str());
    for (const auto& a : areas) {
      const auto it = row.weights.best_weight.find(a);
      if (it == row.weights.best_weight.end())
        std::printf(" %10s", "-");
      else
        std::printf(" %10.4f", it->second);
    }
    std::printf(" %-10s %8.4f\n", row.weights.top_area.empty() ? "-" : row.weights.top_area.c_str(),
                row.weights.margin);
  }
  return 0;
}

int cmd_merge(const Options& o) {
  const auto key = store_key(o);
  std::vector<std::vector<LocationRecord>> inputs;
  for (const auto& path : o.stores)
    inputs.push_back(stage("open store " + path, [&] { return hub::read_store_file(path, key); }));
  const auto merged = hub::merge_records(inputs);
  stage("write store", [&] {
    std::filesystem::remove(o.out);
    hub::FileStore out(o.out, key);
    out.append(merged);
  });
  std::printf("merged %zu stores into %s: %zu records\n", inputs.size(), o.out.c_str(), merged.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"atlas: room-level indoor localization over simulated beacons"};
  app.require_subcommand(1);
  Options o;

  auto add_scenario = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--scenario", o.scenario, "Scenario file")->check(CLI::ExistingFile);
    if (required) opt->required();
    c->add_option("--seed", o.seed, "Override the scenario seed");
  };

  auto* setup = app.add_subcommand("setup", "Run the reference walk and write the fingerprint map");
  add_scenario(setup, true);
  setup->add_option("--grid-spacing", o.grid_spacing, "Reference grid pitch in metres")->check(CLI::PositiveNumber);
  setup->add_option("--dwell", o.dwell, "Seconds spent at each reference point")->check(CLI::PositiveNumber);
  setup->add_option("--out", o.out, "Map file to write")->required();

  auto* run = app.add_subcommand("run", "Drive the live stage and write the location log");
  add_scenario(run, true);
  run->add_option("--map", o.map, "Fingerprint map file")->required()->check(CLI::ExistingFile);
  run->add_option("--duration", o.duration, "Simulated seconds");
  run->add_option("--store", o.store, "Encrypted store file to append to");
  run->add_option("--out", o.out, "Location log to write");
  run->add_flag("--plaintext", o.plaintext, "Refused: plaintext frames are for bench only");

  auto* trace = app.add_subcommand("trace", "Contact report for one user from a store file");
  add_scenario(trace, false);
  trace->add_option("--store", o.store, "Store file")->required();
  trace->add_option("--key", o.key, "Store key, 64 hex characters (default: the scenario's)");
  trace->add_option("--user", o.user, "Hashed user id, 64 hex characters")->required();
  trace->add_option("--from", o.from, "Window start, ms");
  trace->add_option("--to", o.to, "Window end, ms");

  auto* bench = app.add_subcommand("bench", "Encrypted versus plaintext latency table");
  add_scenario(bench, true);
  bench->add_option("--map", o.map, "Fingerprint map file (default: built from the scenario)");
  bench->add_flag("--plaintext", o.plaintext, "Enable the plaintext comparison mode (required)");
  bench->add_option("--repetitions", o.repetitions, "Timed repetitions per cell")->check(CLI::PositiveNumber);

  auto* weights = app.add_subcommand("weights", "Per-area fingerprint weights at given positions");
  add_scenario(weights, true);
  weights->add_option("--map", o.map, "Fingerprint map file")->required()->check(CLI::ExistingFile);
  weights->add_option("--at", o.at, "Position x,y[,floor]; repeatable (default: area centroids)");

  auto* merge = app.add_subcommand("merge", "Merge store files that share one salt domain");
  add_scenario(merge, false);
  merge->add_option("--store", o.stores, "Input store file; repeatable")->required()->check(CLI::ExistingFile);
  merge->add_option("--key", o.key, "Store key, 64 hex characters (default: the scenario's)");
  merge->add_option("--out", o.out, "Merged store to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*setup) return cmd_setup(o);
    if (*run) return cmd_run(o);
    if (*trace) return cmd_trace(o);
    if (*bench) return cmd_bench(o);
    if (*weights) return cmd_weights(o);
    if (*merge) return cmd_merge(o);
  } catch (const StageError& e) {
    std::fprintf(stderr, "atlas: %s failed: %s: %s\n", e.stage.c_str(), std::string(to_string(e.code)).c_str(),
                 e.message.c_str());
    return exit_code_for(e.code);
  } catch (const Error& e) {
    std::fprintf(stderr, "atlas: %s: %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "atlas: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
