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

#include "atlas/hub/analysis.hpp"

#include "atlas/core/error.hpp"
#include "atlas/pipeline/pipeline.hpp"
#include "atlas/sim/path_loss.hpp"

namespace atlas::hub {

Fingerprint probe_fingerprint(const sim::Scenario& scenario, Position position, int samples_per_beacon,
                              sim::Rng& rng, const HashedUserId& user, TimestampMs at) {
  if (samples_per_beacon <= 0) fail(ErrorCode::invalid_input, "samples_per_beacon must be positive");
  const auto& env = scenario.environment;
  pipeline::SampleWindow window{{}, at, at + samples_per_beacon * 1000};
  for (int i = 0; i < samples_per_beacon; ++i) {
    for (const auto& b : env.beacons) {
      if (!sim::in_range(env, b.id, position, scenario.path_loss)) continue;
      const double rssi = sim::rssi_at(env, b.id, position, scenario.path_loss, rng);
      window.samples.push_back(RssiSample::make(b.id, user, rssi, at + i * 1000));
    }
  }
  pipeline::FingerprintOptions options;
  options.kalman = scenario.kalman;
  return pipeline::build_fingerprint(window, user, options);
}

std::vector<WeightProbe> weight_table(const sim::Scenario& scenario, const localizer::MatchIndex& index,
                                      std::span<const Position> positions, std::uint64_t seed,
                                      int samples_per_beacon) {
  const auto& env = scenario.environment;
  sim::Rng rng(seed);
  std::vector<WeightProbe> out;
  for (const auto& p : positions) {
    if (!env.bounds.contains(p.xy()))
      fail(ErrorCode::invalid_input,
           "position (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") is outside the environment bounds");
    WeightProbe probe;
    probe.position = p;
    const auto* area = env.area_at(p);
    probe.true_area = area ? area->label : "";
    try {
      const auto fp = probe_fingerprint(scenario, p, samples_per_beacon, rng, {}, scenario.start_ms);
      probe.weights = localizer::area_weights(fp, index);
      probe.located = localizer::localize(fp, index);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::empty_window) throw;
    }
    out.push_back(std::move(probe));
  }
  return out;
}

MarginStudy margin_study(const sim::Scenario& scenario, const localizer::MatchIndex& index, Position position,
                         std::size_t trials, std::uint64_t seed, int samples_per_beacon) {
  const auto* area = scenario.environment.area_at(position);
  const std::string truth = area ? area->label : "";
  sim::Rng rng(seed);
  MarginStudy study;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto fp = probe_fingerprint(scenario, position, samples_per_beacon, rng, {}, scenario.start_ms);
    const auto w = localizer::area_weights(fp, index);
    ++study.trials;
    study.mean_margin += w.margin;
    if (!w.top_area.empty()) study.mean_top_weight += w.best_weight.at(w.top_area);
    if (w.top_area == truth) ++study.correct;
  }
  if (study.trials > 0) {
    study.mean_margin /= static_cast<double>(study.trials);
    study.mean_top_weight /= static_cast<double>(study.trials);
  }
  return study;
}

}  // namespace atlas::hub
