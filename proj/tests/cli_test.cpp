// Copyright 2026 The mtsim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

struct CmdResult {
  int status = -1;
  std::string out;
};

CmdResult Exec(const std::string& args) {
  const std::string cmd = std::string(MTSIM_CLI) + " " + args + " 2>/dev/null";
  CmdResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

const std::string kTraceDir = MTSIM_TRACE_DIR;

TEST(CliTest, SimulateExitCodes) {
  EXPECT_EQ(Exec("simulate intra-granule --sizes 10 --offset 12").status, 0);
  EXPECT_EQ(
      Exec("simulate intra-granule --sizes 10 --offset 12 --precision-ext")
          .status,
      1);
  EXPECT_EQ(Exec("simulate linear-overflow --policy adjacent-distinct").status,
            1);
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Exec("simulate heap-uaf --tg 24").status, 2);
  EXPECT_EQ(Exec("simulate no-such-bug").status, 2);
  EXPECT_EQ(Exec("probe --ts 5 --trials 10").status, 2);
  EXPECT_EQ(Exec("probe --bogus").status, 2);
  EXPECT_EQ(Exec("simulate heap-uaf --precision-ext --right-align").status, 2);
  EXPECT_EQ(Exec("overhead /nonexistent/trace.txt").status, 2);
  EXPECT_EQ(Exec("").status, 2);
}

TEST(CliTest, ProbeJsonIsDeterministic) {
  const std::string args =
      "probe --tg 16,64 --ts 4,8 --trials 500 --seed 9 --format json";
  const CmdResult a = Exec(args);
  const CmdResult b = Exec(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 8u);
  for (const auto& row : j) {
    for (const char* key :
         {"kind", "trials", "detections", "rate", "theoretical", "model",
          "config"})
      EXPECT_TRUE(row.contains(key)) << key;
    EXPECT_EQ(row["trials"], 500);
    EXPECT_TRUE(row["config"].contains("tg"));
    EXPECT_TRUE(row["config"].contains("policy"));
  }
}

TEST(CliTest, SimulateJson) {
  const CmdResult r = Exec(
      "simulate heap-uaf --quarantine 4096 --format json --seed 4");
  ASSERT_EQ(r.status, 1);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["scenario"], "heap-uaf");
  EXPECT_EQ(j["detected"], true);
  EXPECT_EQ(j["fault"]["state"], "quarantined");
  EXPECT_EQ(j["config"]["quarantine"], 4096);
}

TEST(CliTest, OverheadOnBundledTrace) {
  const CmdResult r = Exec("overhead " + kTraceDir + "/tiny.txt --format json");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["rows"][0]["alignment"], 8);
  EXPECT_EQ(j["rows"][0]["peak_bytes"], 88);
  EXPECT_EQ(j["rows"][1]["peak_bytes"], 96);
  EXPECT_EQ(Exec("overhead " + kTraceDir + "/tiny.txt --alignments 12").status,
            2);
}

}  // namespace
