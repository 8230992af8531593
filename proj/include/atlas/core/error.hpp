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

#include <stdexcept>
#include <string>
#include <string_view>

namespace atlas {

enum class ErrorCode {
  invalid_input,
  empty_window,
  unknown_beacon,
  parse_error,
  validation_error,
  pairing_rejected,
  handshake_failed,
  handshake_timeout,
  session_expired,
  authentication_failure,
  replay_detected,
  malformed_frame,
  plaintext_refused,
  not_ready,
  setup_failed,
  io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as an atlas::Error carrying a code,
// so callers can branch on the code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace atlas
