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

// Protocol overhead benchmark: the same workload timed with sealed frames
// and with the plaintext frame mode.
//
// Rows:
//   User Localization  beacons seal one cycle of sample batches, the hub
//                      opens, fingerprints and localizes them
//   Database Store     one cycle of records appended to a file store
//   First Connection   pairing, device hello and first ping of a new device
//
// Each cell is the minimum over the repetitions, with the two modes
// interleaved so drift affects both alike.

#include <string>
#include <vector>

#include "atlas/core/types.hpp"
#include "atlas/sim/scenario.hpp"

namespace atlas::hub {

struct BenchRow {
  std::string name;
  double encrypted_ms = 0.0;
  double plaintext_ms = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  TimestampMs cycle_period_ms = 0;
  int repetitions = 0;

  bool encrypted_slower_everywhere() const;
  /// Both modes finish the localization path within one cycle.
  bool within_cycle() const;
};

/// `scratch_dir` receives the temporary store files. Throws
/// Error(validation_error) when the scenario yields no samples in its
/// first cycle.
BenchReport run_bench(const sim::Scenario& scenario, const FingerprintMap& map, int repetitions,
                      const std::string& scratch_dir);

std::string format_bench(const BenchReport& report);

}  // namespace atlas::hub
