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

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "atlas/core/text_io.hpp"
#include "atlas/hub/store.hpp"
#include "atlas/sim/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

Result run(const std::string& args) {
  const std::string cmd = std::string(ATLAS_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string scenario(const std::string& name) { return std::string(ATLAS_SCENARIO_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("atlas-cli-test-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { atlas::text::write_file(file(name), text); }

  fs::path dir_;
};

const char* kTinyEnvironment = R"(environment:
  id: tiny
  bounds: {min_x: 0, min_y: 0, max_x: 6, max_y: 4}
  areas:
    - {label: left, floor: 0, rect: {min_x: 0, min_y: 0, max_x: 3, max_y: 4}}
    - {label: right, floor: 0, rect: {min_x: 3, min_y: 0, max_x: 6, max_y: 4}}
  beacons:
    - {id: 00000000-0000-0000-0000-000000000001, x: 1, y: 2, floor: 0}
    - {id: 00000000-0000-0000-0000-000000000002, x: 5, y: 2, floor: 0}
setup: {grid_spacing: 1, dwell_s: 3}
simulation: {seed: 2, duration_s: 30}
)";

}  // namespace

TEST_F(CliTest, NoSubcommandIsUsageError) { EXPECT_EQ(run("").exit_code, 1); }

TEST_F(CliTest, InvalidScenarioReportsLine) {
  write("bad.yaml", std::string(kTinyEnvironment) + "colour: red\n");
  auto r = run("setup --scenario " + file("bad.yaml") + " --out " + file("map.yaml"));
  EXPECT_EQ(r.exit_code, 2) << r.output;
  EXPECT_NE(r.output.find("line 12"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("parse-error"), std::string::npos) << r.output;
}

TEST_F(CliTest, SetupIsDeterministic) {
  write("tiny.yaml", kTinyEnvironment);
  auto a = run("setup --scenario " + file("tiny.yaml") + " --out " + file("a.yaml"));
  auto b = run("setup --scenario " + file("tiny.yaml") + " --out " + file("b.yaml"));
  ASSERT_EQ(a.exit_code, 0) << a.output;
  ASSERT_EQ(b.exit_code, 0) << b.output;
  EXPECT_EQ(atlas::text::read_file(file("a.yaml")), atlas::text::read_file(file("b.yaml")));
  auto c = run("setup --scenario " + file("tiny.yaml") + " --seed 3 --out " + file("c.yaml"));
  ASSERT_EQ(c.exit_code, 0);
  EXPECT_NE(atlas::text::read_file(file("a.yaml")), atlas::text::read_file(file("c.yaml")));
  auto map = atlas::text::read_fingerprint_map(atlas::text::read_file(file("a.yaml")));
  EXPECT_EQ(map.environment_id, "tiny");
}

TEST_F(CliTest, RunWithoutDevicesProducesNoRecords) {
  write("tiny.yaml", kTinyEnvironment);
  ASSERT_EQ(run("setup --scenario " + file("tiny.yaml") + " --out " + file("map.yaml")).exit_code, 0);
  auto r = run("run --scenario " + file("tiny.yaml") + " --map " + file("map.yaml") + " --out " + file("log.yaml"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("cycles: 2"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("records: 0"), std::string::npos) << r.output;
  EXPECT_TRUE(atlas::text::read_records(atlas::text::read_file(file("log.yaml"))).empty());
}

TEST_F(CliTest, RunRefusesPlaintext) {
  write("tiny.yaml", kTinyEnvironment);
  ASSERT_EQ(run("setup --scenario " + file("tiny.yaml") + " --out " + file("map.yaml")).exit_code, 0);
  auto r = run("run --scenario " + file("tiny.yaml") + " --map " + file("map.yaml") + " --plaintext");
  EXPECT_EQ(r.exit_code, 2) << r.output;
  EXPECT_NE(r.output.find("plaintext-refused"), std::string::npos) << r.output;
}

TEST_F(CliTest, RunRejectsMapOfOtherEnvironment) {
  write("tiny.yaml", kTinyEnvironment);
  ASSERT_EQ(run("setup --scenario " + scenario("two_floors.yaml") + " --out " + file("map.yaml")).exit_code, 0);
  auto r = run("run --scenario " + file("tiny.yaml") + " --map " + file("map.yaml"));
  EXPECT_EQ(r.exit_code, 2) << r.output;
}

TEST_F(CliTest, StoreTraceAndWrongKey) {
  const auto s = scenario("two_floors.yaml");
  ASSERT_EQ(run("setup --scenario " + s + " --out " + file("map.yaml")).exit_code, 0);
  auto r = run("run --scenario " + s + " --map " + file("map.yaml") + " --store " + file("store.atlas"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("records: 16"), std::string::npos) << r.output;

  const auto parsed = atlas::sim::load_scenario(s);
  auto records = atlas::hub::read_store_file(file("store.atlas"), parsed.security.store_key);
  ASSERT_EQ(records.size(), 16u);
  const auto who = records.front().user.to_hex();

  auto t = run("trace --scenario " + s + " --store " + file("store.atlas") + " --user " + who);
  EXPECT_EQ(t.exit_code, 0) << t.output;
  EXPECT_EQ(t.output.rfind("user", 0), 0u) << t.output;

  auto bad = run("trace --store " + file("store.atlas") + " --user " + who + " --key " + std::string(64, '1'));
  EXPECT_EQ(bad.exit_code, 3) << bad.output;
  EXPECT_NE(bad.output.find("authentication-failure"), std::string::npos) << bad.output;
}

TEST_F(CliTest, MergeCombinesStores) {
  const auto s = scenario("two_floors.yaml");
  ASSERT_EQ(run("setup --scenario " + s + " --out " + file("map.yaml")).exit_code, 0);
  ASSERT_EQ(run("run --scenario " + s + " --map " + file("map.yaml") + " --store " + file("a.atlas")).exit_code, 0);
  ASSERT_EQ(run("run --scenario " + s + " --map " + file("map.yaml") + " --store " + file("b.atlas")).exit_code, 0);
  auto m = run("merge --scenario " + s + " --store " + file("a.atlas") + " --store " + file("b.atlas") + " --out " +
               file("m.atlas"));
  ASSERT_EQ(m.exit_code, 0) << m.output;
  const auto key = atlas::sim::load_scenario(s).security.store_key;
  const auto a = atlas::hub::read_store_file(file("a.atlas"), key);
  const auto b = atlas::hub::read_store_file(file("b.atlas"), key);
  EXPECT_EQ(atlas::hub::read_store_file(file("m.atlas"), key), atlas::hub::merge_records({a, b}));
}

TEST_F(CliTest, BenchRequiresPlaintextFlag) {
  auto r = run("bench --scenario " + scenario("two_floors.yaml"));
  EXPECT_EQ(r.exit_code, 2) << r.output;
}

TEST_F(CliTest, BenchPrintsThreeRows) {
  auto r = run("bench --plaintext --repetitions 3 --scenario " + scenario("two_floors.yaml"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  for (const char* row : {"User Localization", "Database Store", "First Connection"})
    EXPECT_NE(r.output.find(row), std::string::npos) << row;
}

TEST_F(CliTest, WeightsTable) {
  const auto s = scenario("four_rooms_b2.yaml");
  ASSERT_EQ(run("setup --scenario " + s + " --out " + file("map.yaml")).exit_code, 0);
  auto r = run("weights --scenario " + s + " --map " + file("map.yaml") + " --at 10.5,9.75");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("(10.50,9.75,0)"), std::string::npos) << r.output;
  auto bad = run("weights --scenario " + s + " --map " + file("map.yaml") + " --at 10.5");
  EXPECT_EQ(bad.exit_code, 2) << bad.output;
}
