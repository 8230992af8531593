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

#include "atlas/hub/api.hpp"

#include <yaml-cpp/yaml.h>

#include "atlas/core/error.hpp"
#include "atlas/core/text_io.hpp"
#include "atlas/core/yaml_support.hpp"
#include "atlas/wire/channel.hpp"

namespace atlas::hub {

using namespace atlas::yamlio;

namespace {

ApiResponse error_response(ErrorCode code, std::string message) {
  return ApiResponse{false, std::string(atlas::to_string(code)), std::move(message), {}};
}

std::string_view as_text(const wire::Bytes& b) { return {reinterpret_cast<const char*>(b.data()), b.size()}; }

}  // namespace

std::string encode_response(const ApiResponse& response) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "status" << YAML::Value << (response.ok ? "ok" : "error");
  if (!response.ok) {
    out << YAML::Key << "error" << YAML::Value << response.error;
    out << YAML::Key << "message" << YAML::Value << YAML::DoubleQuoted << response.message;
  } else {
    out << YAML::Key << "body" << YAML::Value << YAML::Literal << response.body;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

ApiResponse decode_response(std::string_view text) {
  const auto root = load(text);
  require_map(root, "response");
  check_keys(root, {"status", "error", "message", "body"}, "response");
  ApiResponse r;
  const auto status = string(root, "status");
  if (status == "ok") {
    r.ok = true;
    r.body = string(root, "body");
  } else if (status == "error") {
    r.error = string(root, "error");
    r.message = has(root, "message") ? string(root, "message") : "";
  } else {
    parse_fail(field(root, "status"), "status must be ok or error");
  }
  return r;
}

std::string write_status(const HubStatus& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << std::string(to_string(s.mode));
  out << YAML::Key << "map_points" << YAML::Value << s.map_points;
  out << YAML::Key << "records" << YAML::Value << s.records;
  out << YAML::Key << "cycles" << YAML::Value << s.cycles;
  out << YAML::Key << "dropped_batches" << YAML::Value << s.dropped_batches;
  out << YAML::Key << "uplinks" << YAML::Value << s.uplinks;
  out << YAML::Key << "last_cycle_end" << YAML::Value << s.last_cycle_end;
  out << YAML::Key << "last_passive_ms" << YAML::Value << text::format_real(s.last_passive_ms);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string write_contacts(const std::vector<ContactEntry>& contacts) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "contacts" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : contacts) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "user" << YAML::Value << c.other.to_hex();
    out << YAML::Key << "area" << YAML::Value << c.area;
    out << YAML::Key << "timestamps" << YAML::Value << YAML::Flow << c.timestamps;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<ContactEntry> read_contacts(std::string_view text) {
  const auto root = load(text);
  require_map(root, "contact report");
  check_keys(root, {"contacts"}, "contact report");
  const auto list = field(root, "contacts");
  require_sequence(list, "contacts");
  std::vector<ContactEntry> out;
  for (const auto& c : list) {
    check_keys(c, {"user", "area", "timestamps"}, "contact");
    ContactEntry e;
    e.other = HashedUserId::parse_hex(string(c, "user"));
    e.area = string(c, "area");
    const auto ts = field(c, "timestamps");
    require_sequence(ts, "timestamps");
    for (const auto& t : ts) e.timestamps.push_back(t.as<TimestampMs>());
    if (e.timestamps.empty()) parse_fail(c, "contact without timestamps");
    out.push_back(std::move(e));
  }
  return out;
}

ApiResponse handle_request(Hub& hub, std::string_view request) {
  try {
    const auto root = load(request);
    require_map(root, "request");
    check_keys(root, {"request", "token", "user", "from", "to", "now"}, "request");
    const auto kind = string(root, "request");
    if (kind == "status") return {true, {}, {}, write_status(hub.status())};
    if (kind == "track" || kind == "contact_trace") {
      const auto user = HashedUserId::parse_hex(string(root, "user"));
      const auto from = integer(root, "from");
      const auto to = integer(root, "to");
      if (kind == "track") return {true, {}, {}, text::write_records(hub.track(user, from, to))};
      return {true, {}, {}, write_contacts(hub.contact_trace(user, from, to))};
    }
    if (kind == "map_export") {
      const auto index = hub.map_index();
      if (!index) return error_response(ErrorCode::not_ready, "no fingerprint map loaded");
      return {true, {}, {}, text::write_fingerprint_map(index->map())};
    }
    if (kind == "retention") {
      const auto removed = hub.prune_retention(integer(root, "now"));
      return {true, {}, {}, "removed: " + std::to_string(removed) + "\n"};
    }
    parse_fail(field(root, "request"), "unknown request '" + kind + "'");
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(ErrorCode::parse_error, e.what());
  }
}

wire::SecureFrame serve_control(Hub& hub, wire::SessionKeys& session, const wire::SecureFrame& frame) {
  const auto opened = wire::open(session, frame);
  ApiResponse response;
  if (opened.msg_type != wire::MsgType::control)
    response = error_response(ErrorCode::malformed_frame, "API requests travel in control frames");
  else
    response = handle_request(hub, as_text(opened.payload));
  return wire::seal(session, wire::MsgType::control, wire::as_bytes(encode_response(response)));
}

AdminEndpoint::AdminEndpoint(Hub& hub, std::string token_hex) : hub_(hub), token_(std::move(token_hex)) {
  if (token_.empty()) fail(ErrorCode::invalid_input, "admin token must not be empty");
}

std::string AdminEndpoint::serve(std::string_view request) {
  std::string presented;
  try {
    const auto root = load(request);
    if (root.IsMap() && root["token"]) presented = root["token"].as<std::string>();
  } catch (const std::exception&) {
    // Falls through to the rejection below; no parse detail leaks before auth.
  }
  if (presented.size() != token_.size() || !wire::constant_time_equal(wire::as_bytes(presented), wire::as_bytes(token_)))
    return encode_response(error_response(ErrorCode::authentication_failure, "missing or invalid admin token"));
  return encode_response(handle_request(hub_, request));
}

void AdminEndpoint::serve_fd(int fd) {
  while (auto message = wire::read_message(fd)) {
    const auto reply = serve(as_text(*message));
    wire::write_message(fd, wire::as_bytes(reply));
  }
}

ApiResponse admin_call(int fd, std::string_view request) {
  wire::write_message(fd, wire::as_bytes(request));
  const auto reply = wire::read_message(fd);
  if (!reply) fail(ErrorCode::io_error, "admin socket closed before replying");
  return decode_response(as_text(*reply));
}

}  // namespace atlas::hub
