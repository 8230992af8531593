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

// Canonical structured-text (YAML subset) encodings of the core types.
//
// Timestamps are integer milliseconds, RSSI values carry one decimal place,
// every other real number is written in shortest round-trip form. Parsers
// reject unknown keys and report the offending line.

#include <string>
#include <string_view>
#include <vector>

#include "atlas/core/types.hpp"

namespace atlas::text {

std::string format_rssi(double rssi);
std::string format_real(double value);

std::string write_environment(const Environment& env);
Environment read_environment(std::string_view text);

std::string write_fingerprint_map(const FingerprintMap& map);
FingerprintMap read_fingerprint_map(std::string_view text);

std::string write_records(const std::vector<LocationRecord>& records);
std::vector<LocationRecord> read_records(std::string_view text);

std::string write_samples(const std::vector<RssiSample>& samples);
std::vector<RssiSample> read_samples(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace atlas::text
