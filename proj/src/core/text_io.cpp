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

#include "atlas/core/text_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "atlas/core/yaml_support.hpp"

namespace atlas::text {

using namespace atlas::yamlio;

std::string format_rssi(double rssi) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", rssi);
  // "-0.0" reads back fine but is not canonical.
  if (std::string_view(buf) == "-0.0") return "0.0";
  return buf;
}

std::string format_real(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

void emit_position(YAML::Emitter& out, const Position& p) {
  out << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "x" << YAML::Value << format_real(p.x);
  out << YAML::Key << "y" << YAML::Value << format_real(p.y);
  out << YAML::Key << "floor" << YAML::Value << p.floor;
  out << YAML::EndMap;
}

void emit_point(YAML::Emitter& out, Point2 p) {
  out << YAML::Flow << YAML::BeginSeq << format_real(p.x) << format_real(p.y) << YAML::EndSeq;
}

void emit_fingerprint(YAML::Emitter& out, const Fingerprint& fp) {
  out << YAML::BeginMap;
  out << YAML::Key << "timestamp" << YAML::Value << fp.timestamp();
  out << YAML::Key << "owner" << YAML::Value << YAML::Flow << YAML::BeginMap;
  if (const auto* user = std::get_if<HashedUserId>(&fp.owner()))
    out << YAML::Key << "user" << YAML::Value << user->to_hex();
  else
    out << YAML::Key << "reference_point" << YAML::Value << std::get<ReferencePointId>(fp.owner()).str();
  out << YAML::EndMap;
  out << YAML::Key << "entries" << YAML::Value << YAML::BeginSeq;
  for (const auto& [beacon, rssi] : fp.entries()) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "beacon" << YAML::Value << beacon.to_string();
    out << YAML::Key << "rssi" << YAML::Value << format_rssi(rssi);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
}

BeaconId beacon_id(const YAML::Node& node, std::string_view key) {
  auto n = field(node, key);
  try {
    return BeaconId::parse(n.as<std::string>());
  } catch (const Error& e) {
    parse_fail(n, e.what());
  }
}

HashedUserId user_id(const YAML::Node& node, std::string_view key) {
  auto n = field(node, key);
  try {
    return HashedUserId::parse_hex(n.as<std::string>());
  } catch (const Error& e) {
    parse_fail(n, e.what());
  }
}

double rssi_field(const YAML::Node& node) {
  double v = real(node, "rssi");
  if (!rssi_in_range(v)) parse_fail(field(node, "rssi"), "rssi outside [-110, 0] dBm");
  return v;
}

Fingerprint fingerprint_from(const YAML::Node& node) {
  check_keys(node, {"timestamp", "owner", "entries"}, "fingerprint");
  auto owner_node = field(node, "owner");
  check_keys(owner_node, {"user", "reference_point"}, "fingerprint owner");
  FingerprintOwner owner;
  if (has(owner_node, "user"))
    owner = user_id(owner_node, "user");
  else
    owner = ReferencePointId(string(owner_node, "reference_point"));

  auto entries_node = field(node, "entries");
  require_sequence(entries_node, "fingerprint entries");
  std::vector<std::pair<BeaconId, double>> entries;
  for (const auto& e : entries_node) {
    check_keys(e, {"beacon", "rssi"}, "fingerprint entry");
    entries.emplace_back(beacon_id(e, "beacon"), rssi_field(e));
  }
  try {
    return Fingerprint(entries, integer(node, "timestamp"), owner);
  } catch (const Error& err) {
    parse_fail(node, err.what());
  }
}

template <class Fn>
auto with_document(std::string_view text, Fn&& fn) {
  auto root = load(text);
  try {
    return fn(root);
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::parse_error, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

}  // namespace

}  // namespace atlas::text

namespace atlas::yamlio {

using text::format_real;

Environment environment_from(const YAML::Node& node) {
  check_keys(node, {"id", "bounds", "floor_height", "floor_attenuation", "areas", "walls", "beacons"},
             "environment");
  Environment env;
  env.id = string(node, "id");
  auto b = field(node, "bounds");
  check_keys(b, {"min_x", "min_y", "max_x", "max_y"}, "bounds");
  env.bounds = Rect{real(b, "min_x"), real(b, "min_y"), real(b, "max_x"), real(b, "max_y")};
  env.floor_height_m = real_or(node, "floor_height", env.floor_height_m);
  env.floor_attenuation_db = real_or(node, "floor_attenuation", env.floor_attenuation_db);

  if (has(node, "areas")) {
    auto areas = field(node, "areas");
    require_sequence(areas, "areas");
    for (const auto& a : areas) {
      check_keys(a, {"label", "floor", "rect", "polygon"}, "area");
      auto label = string(a, "label");
      int floor = static_cast<int>(integer_or(a, "floor", 0));
      if (has(a, "rect") == has(a, "polygon")) parse_fail(a, "area needs exactly one of 'rect' or 'polygon'");
      if (has(a, "rect")) {
        auto r = field(a, "rect");
        check_keys(r, {"min_x", "min_y", "max_x", "max_y"}, "rect");
        env.areas.push_back(
            Area::rectangle(label, floor, Rect{real(r, "min_x"), real(r, "min_y"), real(r, "max_x"), real(r, "max_y")}));
      } else {
        auto poly = field(a, "polygon");
        require_sequence(poly, "polygon");
        Area area{label, floor, {}};
        for (const auto& v : poly) area.polygon.push_back(point(v));
        env.areas.push_back(std::move(area));
      }
    }
  }
  if (has(node, "walls")) {
    auto walls = field(node, "walls");
    require_sequence(walls, "walls");
    for (const auto& w : walls) {
      check_keys(w, {"from", "to", "floor", "attenuation"}, "wall");
      env.walls.push_back(Wall{point(field(w, "from")), point(field(w, "to")),
                               static_cast<int>(integer_or(w, "floor", 0)), real(w, "attenuation")});
    }
  }
  if (has(node, "beacons")) {
    auto beacons = field(node, "beacons");
    require_sequence(beacons, "beacons");
    for (const auto& bn : beacons) {
      check_keys(bn, {"id", "x", "y", "floor"}, "beacon");
      auto idn = field(bn, "id");
      BeaconId id;
      try {
        id = BeaconId::parse(idn.as<std::string>());
      } catch (const Error& e) {
        parse_fail(idn, e.what());
      }
      env.beacons.push_back(
          BeaconPlacement{id, Position{real(bn, "x"), real(bn, "y"), static_cast<int>(integer_or(bn, "floor", 0))}});
    }
  }
  try {
    env.validate();
  } catch (const Error& e) {
    parse_fail(node, e.what());
  }
  return env;
}

void emit_environment(YAML::Emitter& out, const Environment& env) {
  out << YAML::BeginMap;
  out << YAML::Key << "id" << YAML::Value << env.id;
  out << YAML::Key << "bounds" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "min_x" << YAML::Value << format_real(env.bounds.min_x);
  out << YAML::Key << "min_y" << YAML::Value << format_real(env.bounds.min_y);
  out << YAML::Key << "max_x" << YAML::Value << format_real(env.bounds.max_x);
  out << YAML::Key << "max_y" << YAML::Value << format_real(env.bounds.max_y);
  out << YAML::EndMap;
  out << YAML::Key << "floor_height" << YAML::Value << format_real(env.floor_height_m);
  out << YAML::Key << "floor_attenuation" << YAML::Value << format_real(env.floor_attenuation_db);

  out << YAML::Key << "areas" << YAML::Value << YAML::BeginSeq;
  for (const auto& a : env.areas) {
    out << YAML::BeginMap;
    out << YAML::Key << "label" << YAML::Value << a.label;
    out << YAML::Key << "floor" << YAML::Value << a.floor;
    out << YAML::Key << "polygon" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& v : a.polygon) text::emit_point(out, v);
    out << YAML::EndSeq;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "walls" << YAML::Value << YAML::BeginSeq;
  for (const auto& w : env.walls) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "from" << YAML::Value;
    text::emit_point(out, w.from);
    out << YAML::Key << "to" << YAML::Value;
    text::emit_point(out, w.to);
    out << YAML::Key << "floor" << YAML::Value << w.floor;
    out << YAML::Key << "attenuation" << YAML::Value << format_real(w.attenuation_db);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "beacons" << YAML::Value << YAML::BeginSeq;
  for (const auto& b : env.beacons) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << b.id.to_string();
    out << YAML::Key << "x" << YAML::Value << format_real(b.position.x);
    out << YAML::Key << "y" << YAML::Value << format_real(b.position.y);
    out << YAML::Key << "floor" << YAML::Value << b.position.floor;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
}

}  // namespace atlas::yamlio

namespace atlas::text {

std::string write_environment(const Environment& env) {
  YAML::Emitter out;
  emit_environment(out, env);
  return std::string(out.c_str()) + "\n";
}

Environment read_environment(std::string_view text) {
  return with_document(text, [](const YAML::Node& root) { return environment_from(root); });
}

std::string write_fingerprint_map(const FingerprintMap& map) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "environment_id" << YAML::Value << map.environment_id;
  out << YAML::Key << "created_at" << YAML::Value << map.created_at;
  out << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : map.points) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << p.id.str();
    out << YAML::Key << "position" << YAML::Value;
    emit_position(out, p.position);
    out << YAML::Key << "area" << YAML::Value << p.area;
    out << YAML::Key << "fingerprint" << YAML::Value;
    emit_fingerprint(out, p.fingerprint);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

FingerprintMap read_fingerprint_map(std::string_view text) {
  return with_document(text, [](const YAML::Node& root) {
    check_keys(root, {"environment_id", "created_at", "points"}, "fingerprint map");
    FingerprintMap map;
    map.environment_id = string(root, "environment_id");
    map.created_at = integer(root, "created_at");
    auto points = field(root, "points");
    require_sequence(points, "points");
    for (const auto& p : points) {
      check_keys(p, {"id", "position", "area", "fingerprint"}, "reference point");
      map.points.push_back(ReferencePoint{ReferencePointId(string(p, "id")), position(field(p, "position")),
                                          string(p, "area"), fingerprint_from(field(p, "fingerprint"))});
    }
    try {
      map.validate();
    } catch (const Error& e) {
      parse_fail(root, e.what());
    }
    return map;
  });
}

namespace {

// The emitter spends most of a data-plane log deciding, string by string,
// whether a scalar may be written plain. Logs whose scalars all fall in a
// charset it always writes plain are formatted directly, byte for byte as the
// emitter would; anything else goes through the emitter.
bool plain_safe(std::string_view s) {
  if (s.empty() || s.back() == ' ') return false;
  const auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  if (!alnum(s[0]) && !(s[0] == '-' && s.size() > 1 && std::isdigit(static_cast<unsigned char>(s[1])))) return false;
  for (char c : s)
    if (!alnum(c) && c != ' ' && c != '_' && c != '.' && c != '+' && c != '-') return false;
  std::string lower(s);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (std::string_view word : {"null", "true", "false", "yes", "no", "on", "off", "y", "n"})
    if (lower == word) return false;
  return true;
}

using Fields = std::vector<std::pair<std::string_view, std::string>>;

std::optional<std::string> write_plain_log(std::string_view name, const std::vector<Fields>& items) {
  std::string out(name);
  out += ":\n";
  if (items.empty()) return out + "  []\n";
  for (const auto& item : items) {
    out += "  - {";
    for (std::size_t i = 0; i < item.size(); ++i) {
      if (!plain_safe(item[i].second)) return std::nullopt;
      if (i) out += ", ";
      out.append(item[i].first).append(": ").append(item[i].second);
    }
    out += "}\n";
  }
  return out;
}

std::string emit_log(std::string_view name, const std::vector<Fields>& items) {
  if (auto fast = write_plain_log(name, items)) return *fast;
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << std::string(name) << YAML::Value << YAML::BeginSeq;
  for (const auto& item : items) {
    out << YAML::Flow << YAML::BeginMap;
    for (const auto& [key, value] : item) out << YAML::Key << std::string(key) << YAML::Value << value;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace

std::string write_records(const std::vector<LocationRecord>& records) {
  std::vector<Fields> items;
  items.reserve(records.size());
  for (const auto& r : records)
    items.push_back({{"user", r.user.to_hex()},
                     {"area", r.area},
                     {"reference_point", r.reference_point.str()},
                     {"confidence", format_real(r.confidence)},
                     {"timestamp", std::to_string(r.timestamp)}});
  return emit_log("records", items);
}

std::vector<LocationRecord> read_records(std::string_view text) {
  return with_document(text, [](const YAML::Node& root) {
    check_keys(root, {"records"}, "record log");
    auto list = field(root, "records");
    require_sequence(list, "records");
    std::vector<LocationRecord> out;
    for (const auto& r : list) {
      check_keys(r, {"user", "area", "reference_point", "confidence", "timestamp"}, "location record");
      LocationRecord rec{user_id(r, "user"), string(r, "area"), ReferencePointId(string(r, "reference_point")),
                         real(r, "confidence"), integer(r, "timestamp")};
      if (!(rec.confidence > 0.0 && rec.confidence <= 1.0)) parse_fail(r, "confidence must lie in (0, 1]");
      out.push_back(std::move(rec));
    }
    return out;
  });
}

std::string write_samples(const std::vector<RssiSample>& samples) {
  std::vector<Fields> items;
  items.reserve(samples.size());
  for (const auto& s : samples)
    items.push_back({{"beacon", s.beacon.to_string()},
                     {"device", s.device.to_hex()},
                     {"rssi", format_rssi(s.rssi)},
                     {"timestamp", std::to_string(s.timestamp)}});
  return emit_log("samples", items);
}

std::vector<RssiSample> read_samples(std::string_view text) {
  return with_document(text, [](const YAML::Node& root) {
    check_keys(root, {"samples"}, "sample log");
    auto list = field(root, "samples");
    require_sequence(list, "samples");
    std::vector<RssiSample> out;
    for (const auto& s : list) {
      check_keys(s, {"beacon", "device", "rssi", "timestamp"}, "sample");
      auto ts = integer(s, "timestamp");
      if (ts <= 0) parse_fail(s, "sample timestamp must be positive");
      out.push_back(RssiSample{beacon_id(s, "beacon"), user_id(s, "device"), rssi_field(s), ts});
    }
    return out;
  });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(ErrorCode::io_error, "write failed for '" + path + "'");
}

}  // namespace atlas::text
