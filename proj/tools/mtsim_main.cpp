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

// mtsim: command-line driver for the memory tagging simulator.
//
//   mtsim probe     Monte-Carlo detection rates over a kind x (tg, ts) matrix
//   mtsim simulate  run one scenario verbosely; exit 1 if the bug is caught
//   mtsim overhead  heap over-alignment overhead of an allocation trace
//
// Exit codes: 0 success, 1 bug detected (simulate), 2 usage or input error,
// 3 internal harness error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtsim/detection.h"
#include "mtsim/errors.h"
#include "mtsim/report.h"
#include "mtsim/scenario.h"
#include "mtsim/trace.h"

namespace {

using namespace mtsim;

constexpr int kExitOk = 0;
constexpr int kExitDetected = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct CommonFlags {
  std::vector<u64> tg = {16};
  std::vector<unsigned> ts = {8};
  std::string policy = "random";
  u64 trials = 100000;
  u64 seed = 1;
  bool precision_ext = false;
  bool zero_on_tag = false;
  bool right_align = false;
  std::string store_mode = "precise";
  u64 quarantine = 0;
  double sampling_rate = 1.0;
  std::string format;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& f, bool matrix) {
  auto* tg = cmd->add_option("--tg", f.tg, "granule size in bytes (16|32|64)");
  auto* ts = cmd->add_option("--ts", f.ts, "tag width in bits (4|8)");
  if (matrix) {
    tg->delimiter(',');
    ts->delimiter(',');
  } else {
    tg->expected(1);
    ts->expected(1);
  }
  cmd->add_option("--policy", f.policy, "tag policy")
      ->check(CLI::IsMember({"random", "adjacent-distinct", "sampled"}));
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_flag("--precision-ext", f.precision_ext,
                "partial-granule precision extension");
  cmd->add_flag("--zero-on-tag", f.zero_on_tag, "zero memory while tagging");
  cmd->add_flag("--right-align", f.right_align,
                "right-align allocations inside their last granule");
  cmd->add_option("--store-mode", f.store_mode, "store trap mode")
      ->check(CLI::IsMember({"precise", "imprecise"}));
  cmd->add_option("--quarantine", f.quarantine, "quarantine capacity (bytes)");
  cmd->add_option("--sampling-rate", f.sampling_rate,
                  "fraction of allocations tagged under --policy sampled")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"plain", "json"}));
}

MtConfig MakeConfig(const CommonFlags& f, u64 tg, unsigned ts) {
  MtConfig cfg;
  cfg.tg = tg;
  cfg.ts = ts;
  cfg.zero_on_tag = f.zero_on_tag;
  cfg.precision_ext = f.precision_ext;
  cfg.right_align = f.right_align;
  cfg.sampling_rate = f.sampling_rate;
  cfg.store_mode = f.store_mode == "imprecise" ? StoreMode::kImpreciseStores
                                               : StoreMode::kPrecise;
  cfg.quarantine_capacity = f.quarantine;
  cfg.Validate();
  return cfg;
}

TagPolicy MakePolicy(const CommonFlags& f) {
  if (f.policy == "adjacent-distinct") return TagPolicy::AdjacentDistinct();
  if (f.policy == "sampled") return TagPolicy::Sampled(f.sampling_rate);
  return TagPolicy::Random();
}

ScenarioKind ParseKind(const std::string& name) {
  if (auto kind = ParseScenarioName(name)) return *kind;
  throw UsageError("unknown scenario '" + name + "'");
}

int RunProbe(const CommonFlags& f, const std::vector<std::string>& kinds,
             bool no_reuse, const std::string& access) {
  std::vector<DetectionReport> reports;
  for (const std::string& name : kinds) {
    for (u64 tg : f.tg) {
      for (unsigned ts : f.ts) {
        EstimateOptions opts;
        opts.kind = ParseKind(name);
        opts.policy = MakePolicy(f);
        opts.trials = f.trials;
        opts.seed = f.seed;
        opts.force_reuse = !no_reuse;
        opts.bug_access =
            access == "store" ? AccessKind::kStore : AccessKind::kLoad;
        reports.push_back(EstimateDetection(opts, MakeConfig(f, tg, ts)));
      }
    }
  }
  if (f.format == "plain") {
    std::cout << RenderPlain(reports);
  } else {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const DetectionReport& r : reports) out.push_back(ToJson(r));
    std::cout << out.dump(2) << "\n";
  }
  return kExitOk;
}

struct SimulateFlags {
  std::string scenario;
  std::vector<u64> sizes;
  std::optional<size_t> victim;
  std::optional<int64_t> offset;
  unsigned reuse_depth = 0;
  bool flush = false;
  std::string access = "load";
};

int RunSimulate(const CommonFlags& f, const SimulateFlags& sf) {
  const MtConfig cfg = MakeConfig(f, f.tg.at(0), f.ts.at(0));
  Scenario s = DefaultScenario(ParseKind(sf.scenario));
  s.policy = MakePolicy(f);
  s.seed = f.seed;
  if (!sf.sizes.empty()) {
    s.sizes = sf.sizes;
    s.victim = 0;
    if (s.kind == ScenarioKind::kNonLinearOverflow)
      s.victim = s.sizes.size() - 1;
  }
  if (sf.victim) s.victim = *sf.victim;
  s.offset = sf.offset;
  s.reuse_depth = sf.reuse_depth;
  s.flush_before_reuse = sf.flush;
  s.bug_access = sf.access == "store" ? AccessKind::kStore : AccessKind::kLoad;

  const ScenarioOutcome out = RunScenario(s, cfg, /*trace=*/true);
  if (f.format == "json") {
    nlohmann::ordered_json j;
    j["scenario"] = ScenarioName(s.kind);
    j["detected"] = out.detected;
    j["fault"] = out.report ? nlohmann::ordered_json::parse(RenderJson(*out.report))
                            : nlohmann::ordered_json();
    j["observed"] = out.observed ? nlohmann::ordered_json(*out.observed)
                                 : nlohmann::ordered_json();
    j["log"] = out.log;
    j["config"] = ConfigToJson(cfg);
    std::cout << j.dump(2) << "\n";
  } else {
    for (const std::string& line : out.log) std::cout << line << "\n";
    std::cout << ScenarioName(s.kind)
              << (out.detected ? ": detected\n" : ": not detected\n");
  }
  return out.detected ? kExitDetected : kExitOk;
}

int RunOverhead(const CommonFlags& f, const std::string& path,
                const std::vector<u64>& alignments) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open trace file '" + path + "'");
  const std::vector<TraceEvent> events = ParseTrace(in);
  const OverheadReport report = AnalyzeTrace(events, alignments, f.ts.at(0));
  if (f.format == "json")
    std::cout << ToJson(report).dump(2) << "\n";
  else
    std::cout << RenderPlain(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memory tagging simulator"};
  app.require_subcommand(1);

  CommonFlags probe_flags;
  std::vector<std::string> kinds = {"heap-uaf", "non-linear-overflow"};
  bool no_reuse = false;
  std::string probe_access = "load";
  auto* probe = app.add_subcommand("probe", "estimate detection rates");
  AddCommonFlags(probe, probe_flags, /*matrix=*/true);
  probe->add_option("--trials", probe_flags.trials, "trials per cell")
      ->check(CLI::PositiveNumber);
  probe->add_option("--kinds", kinds, "scenario kinds")->delimiter(',');
  probe->add_flag("--no-reuse", no_reuse,
                  "heap-uaf: do not force reuse of the freed chunk");
  probe->add_option("--access", probe_access, "bug access")
      ->check(CLI::IsMember({"load", "store"}));

  CommonFlags sim_flags;
  SimulateFlags sf;
  auto* simulate = app.add_subcommand("simulate", "run one scenario");
  AddCommonFlags(simulate, sim_flags, /*matrix=*/false);
  simulate->add_option("scenario", sf.scenario, "scenario name")->required();
  simulate->add_option("--sizes", sf.sizes, "chunk or local sizes")
      ->delimiter(',');
  simulate->add_option("--victim", sf.victim, "index of the victim size");
  simulate->add_option("--offset", sf.offset, "bug access offset");
  simulate->add_option("--reuse-depth", sf.reuse_depth,
                       "allocations / frame re-entries after the free");
  simulate->add_flag("--flush", sf.flush, "flush the quarantine before reuse");
  simulate->add_option("--access", sf.access, "bug access")
      ->check(CLI::IsMember({"load", "store"}));

  CommonFlags overhead_flags;
  std::string trace_path;
  std::vector<u64> alignments = {16, 32, 64};
  auto* overhead = app.add_subcommand("overhead", "analyze a malloc trace");
  AddCommonFlags(overhead, overhead_flags, /*matrix=*/false);
  overhead->add_option("trace", trace_path, "trace file")->required();
  overhead->add_option("--alignments", alignments, "alignments to compare")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*probe) {
      if (probe_flags.format.empty()) probe_flags.format = "json";
      return RunProbe(probe_flags, kinds, no_reuse, probe_access);
    }
    if (*simulate) return RunSimulate(sim_flags, sf);
    return RunOverhead(overhead_flags, trace_path, alignments);
  } catch (const UsageError& e) {
    std::cerr << "mtsim: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "mtsim: " << trace_path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const AllocationFailure& e) {
    std::cerr << "mtsim: " << e.what() << "\n";
    return kExitUsage;
  } catch (const HarnessError& e) {
    std::cerr << "mtsim: internal: " << e.what() << "\n";
    return kExitInternal;
  }
}
