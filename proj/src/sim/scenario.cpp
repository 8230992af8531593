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

#include "atlas/sim/scenario.hpp"

#include <sodium.h>

#include "atlas/core/text_io.hpp"
#include "atlas/core/yaml_support.hpp"

namespace atlas::sim {

using namespace atlas::yamlio;

namespace {

Key32 derive_key(std::string_view environment_id, std::string_view purpose) {
  std::string input = "atlas-demo-key:" + std::string(purpose) + ":" + std::string(environment_id);
  Key32 out{};
  crypto_hash_sha256(out.data(), reinterpret_cast<const unsigned char*>(input.data()), input.size());
  return out;
}

std::vector<std::uint8_t> hex_bytes(const YAML::Node& node, std::string_view key) {
  auto n = field(node, key);
  try {
    std::string raw = from_hex_string(n.as<std::string>());
    return {raw.begin(), raw.end()};
  } catch (const Error& e) {
    parse_fail(n, e.what());
  }
}

Key32 key32(const YAML::Node& node, std::string_view key) {
  auto bytes = hex_bytes(node, key);
  if (bytes.size() != 32) parse_fail(field(node, key), std::string(key) + " must be 32 bytes (64 hex characters)");
  Key32 out{};
  std::copy(bytes.begin(), bytes.end(), out.begin());
  return out;
}

}  // namespace

SecurityMaterial derive_demo_security(std::string_view environment_id) {
  SecurityMaterial m;
  auto salt = derive_key(environment_id, "salt");
  m.salt.assign(salt.begin(), salt.begin() + 16);
  m.pairing_secret = derive_key(environment_id, "pairing");
  m.psk = derive_key(environment_id, "psk");
  m.store_key = derive_key(environment_id, "store");
  return m;
}

WorldConfig Scenario::world_config() const {
  WorldConfig c;
  c.path_loss = path_loss;
  c.cycle = cycle;
  c.seed = seed;
  c.start_ms = start_ms;
  c.salt = security.salt;
  return c;
}

Scenario parse_scenario(std::string_view text) {
  auto root = load(text);
  try {
    check_keys(root,
               {"environment", "path_loss", "kalman", "cycle", "security", "setup", "simulation", "store", "devices"},
               "scenario");
    Scenario s;
    s.environment = environment_from(field(root, "environment"));
    s.security = derive_demo_security(s.environment.id);

    if (has(root, "path_loss")) {
      auto n = field(root, "path_loss");
      check_keys(n, {"rssi_at_1m", "exponent", "noise_sigma"}, "path_loss");
      s.path_loss.rssi_at_1m = real_or(n, "rssi_at_1m", s.path_loss.rssi_at_1m);
      s.path_loss.exponent = real_or(n, "exponent", s.path_loss.exponent);
      s.path_loss.noise_sigma = real_or(n, "noise_sigma", s.path_loss.noise_sigma);
      try {
        s.path_loss.validate();
      } catch (const Error& e) {
        parse_fail(n, e.what());
      }
    }
    if (has(root, "kalman")) {
      auto n = field(root, "kalman");
      check_keys(n, {"process_variance", "measurement_variance", "initial_variance"}, "kalman");
      s.kalman.process_variance = real_or(n, "process_variance", s.kalman.process_variance);
      s.kalman.measurement_variance = real_or(n, "measurement_variance", s.kalman.measurement_variance);
      s.kalman.initial_variance = real_or(n, "initial_variance", s.kalman.initial_variance);
      try {
        s.kalman.validate();
      } catch (const Error& e) {
        parse_fail(n, e.what());
      }
    }
    if (has(root, "cycle")) {
      auto n = field(root, "cycle");
      check_keys(n, {"period_ms", "round_trip_ms", "max_parallel"}, "cycle");
      s.cycle.cycle_period_ms = integer_or(n, "period_ms", s.cycle.cycle_period_ms);
      s.cycle.round_trip_ms = integer_or(n, "round_trip_ms", s.cycle.round_trip_ms);
      s.cycle.max_parallel_per_beacon =
          static_cast<std::size_t>(integer_or(n, "max_parallel", static_cast<std::int64_t>(s.cycle.max_parallel_per_beacon)));
      try {
        s.cycle.validate();
      } catch (const Error& e) {
        parse_fail(n, e.what());
      }
    }
    if (has(root, "security")) {
      auto n = field(root, "security");
      check_keys(n, {"salt", "pairing_secret", "psk", "store_key"}, "security");
      if (has(n, "salt")) {
        s.security.salt = hex_bytes(n, "salt");
        if (s.security.salt.size() < 16) parse_fail(field(n, "salt"), "salt must be at least 16 bytes");
      }
      if (has(n, "pairing_secret")) s.security.pairing_secret = key32(n, "pairing_secret");
      if (has(n, "psk")) s.security.psk = key32(n, "psk");
      if (has(n, "store_key")) s.security.store_key = key32(n, "store_key");
    }
    if (has(root, "setup")) {
      auto n = field(root, "setup");
      check_keys(n, {"grid_spacing", "dwell_s", "layout"}, "setup");
      if (has(n, "layout")) {
        const auto layout = string(n, "layout");
        if (layout == "grid")
          s.layout = SurveyLayout::grid;
        else if (layout == "area_centres")
          s.layout = SurveyLayout::area_centres;
        else
          parse_fail(field(n, "layout"), "layout must be 'grid' or 'area_centres'");
      }
      s.grid_spacing = real_or(n, "grid_spacing", s.grid_spacing);
      s.dwell_s = static_cast<int>(integer_or(n, "dwell_s", s.dwell_s));
      if (!(s.grid_spacing > 0.0) || s.dwell_s <= 0) parse_fail(n, "grid_spacing and dwell_s must be positive");
    }
    if (has(root, "simulation")) {
      auto n = field(root, "simulation");
      check_keys(n, {"seed", "duration_s", "start_ms"}, "simulation");
      s.seed = static_cast<std::uint64_t>(integer_or(n, "seed", static_cast<std::int64_t>(s.seed)));
      s.duration_s = integer_or(n, "duration_s", s.duration_s);
      s.start_ms = integer_or(n, "start_ms", s.start_ms);
      if (s.duration_s < 0 || s.start_ms <= 0) parse_fail(n, "duration_s must be >= 0 and start_ms > 0");
    }
    if (has(root, "store")) {
      auto n = field(root, "store");
      check_keys(n, {"retention_days"}, "store");
      s.retention_days = static_cast<int>(integer_or(n, "retention_days", s.retention_days));
      if (s.retention_days <= 0) parse_fail(n, "retention_days must be positive");
    }
    if (has(root, "devices")) {
      auto list = field(root, "devices");
      require_sequence(list, "devices");
      for (const auto& d : list) {
        check_keys(d, {"id", "paired", "waypoints"}, "device");
        SimDevice dev;
        dev.raw_id = string(d, "id");
        dev.paired = boolean_or(d, "paired", true);
        auto wps = field(d, "waypoints");
        require_sequence(wps, "waypoints");
        for (const auto& w : wps) {
          check_keys(w, {"t", "x", "y", "floor"}, "waypoint");
          Waypoint wp;
          wp.t = s.start_ms + static_cast<TimestampMs>(real(w, "t") * 1000.0);
          wp.position = Position{real(w, "x"), real(w, "y"), static_cast<int>(integer_or(w, "floor", 0))};
          if (!s.environment.bounds.contains(wp.position.xy())) parse_fail(w, "waypoint lies outside the environment");
          dev.waypoints.push_back(wp);
        }
        try {
          dev.validate();
        } catch (const Error& e) {
          parse_fail(d, e.what());
        }
        s.devices.push_back(std::move(dev));
      }
    }
    return s;
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::parse_error, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

Scenario load_scenario(const std::string& path) {
  auto contents = text::read_file(path);
  try {
    return parse_scenario(contents);
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

}  // namespace atlas::sim
