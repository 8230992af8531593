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

// Request/response API of the hub.
//
// Request (structured text):
//   request: status | track | contact_trace | map_export | retention
//   token:   admin token, hex (admin socket only)
//   user:    hashed user id, hex (track, contact_trace)
//   from:    ms, inclusive (track, contact_trace)
//   to:      ms, inclusive (track, contact_trace)
//   now:     ms (retention)
//
// Response:
//   status:  ok | error
//   error:   error code name (errors only)
//   message: diagnostic (errors only)
//   body:    request-specific text (ok only)

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atlas/hub/hub.hpp"
#include "atlas/wire/session.hpp"

namespace atlas::hub {

struct ApiResponse {
  bool ok = false;
  std::string error;
  std::string message;
  std::string body;

  bool operator==(const ApiResponse&) const = default;
};

std::string encode_response(const ApiResponse& response);
ApiResponse decode_response(std::string_view text);

std::string write_status(const HubStatus& status);
std::string write_contacts(const std::vector<ContactEntry>& contacts);
std::vector<ContactEntry> read_contacts(std::string_view text);

/// Dispatches an already-authenticated request. Never throws: malformed
/// requests come back as error responses.
ApiResponse handle_request(Hub& hub, std::string_view request);

/// Serves requests arriving as sealed control frames on an established
/// session; the reply is sealed on the same session. Throws the wire error
/// when the frame does not authenticate, so no reply is produced.
wire::SecureFrame serve_control(Hub& hub, wire::SessionKeys& session, const wire::SecureFrame& frame);

/// Local administrative endpoint: requests must carry the admin token.
class AdminEndpoint {
 public:
  AdminEndpoint(Hub& hub, std::string token_hex);

  std::string serve(std::string_view request);
  /// Length-prefixed request/response loop until end of stream.
  void serve_fd(int fd);

 private:
  Hub& hub_;
  std::string token_;
};

/// Client side of the admin socket.
ApiResponse admin_call(int fd, std::string_view request);

}  // namespace atlas::hub
