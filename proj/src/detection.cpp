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

#include "mtsim/detection.h"

#include <random>

#include "mtsim/errors.h"
#include "mtsim/mix.h"

namespace mtsim {

namespace {

u64 Uniform(std::mt19937_64& rng, u64 lo, u64 hi) {
  return std::uniform_int_distribution<u64>(lo, hi)(rng);
}

bool IsTagCollisionKind(const EstimateOptions& opts) {
  if (opts.policy.kind != TagPolicyKind::kRandom) return false;
  return (opts.kind == ScenarioKind::kHeapUseAfterFree && opts.force_reuse) ||
         opts.kind == ScenarioKind::kNonLinearOverflow;
}

}  // namespace

u64 TrialSeed(u64 seed, u64 index) { return Mix64(Mix64(seed) ^ index); }

Scenario MakeTrialScenario(const EstimateOptions& opts, const MtConfig& cfg,
                           u64 index) {
  const u64 seed = TrialSeed(opts.seed, index);
  // Parameters come from their own stream so they never shift the tag draws.
  std::mt19937_64 rng(Mix64(seed ^ 0x5ca1ab1e));

  Scenario s;
  s.kind = opts.kind;
  s.policy = opts.policy;
  s.seed = seed;
  s.bug_access = opts.bug_access;

  switch (opts.kind) {
    case ScenarioKind::kHeapUseAfterFree: {
      const u64 others = Uniform(rng, 0, 3);
      for (u64 i = 0; i < others; ++i) s.sizes.push_back(Uniform(rng, 1, 256));
      s.victim = s.sizes.size();
      s.sizes.push_back(Uniform(rng, 1, 256));
      s.offset = static_cast<int64_t>(Uniform(rng, 0, s.sizes.back() - 1));
      if (opts.force_reuse) {
        s.reuse_depth = 1;
        s.flush_before_reuse = true;
      } else {
        s.reuse_depth = static_cast<unsigned>(Uniform(rng, 1, 3));
      }
      break;
    }
    case ScenarioKind::kLinearOverflow:
    case ScenarioKind::kLinearUnderflow: {
      const u64 n = Uniform(rng, 1, 6);
      for (u64 i = 0; i < n; ++i) s.sizes.push_back(Uniform(rng, 1, 4 * cfg.tg));
      s.victim = Uniform(rng, 0, n - 1);
      break;
    }
    case ScenarioKind::kNonLinearOverflow: {
      s.sizes.push_back(Uniform(rng, 1, 256));
      const u64 fillers = Uniform(rng, 1, 4);
      for (u64 i = 0; i < fillers; ++i) s.sizes.push_back(Uniform(rng, 1, 256));
      s.victim = s.sizes.size();
      s.sizes.push_back(Uniform(rng, 1, 256));
      s.offset = static_cast<int64_t>(Uniform(rng, 0, s.sizes.back() - 1));
      break;
    }
    case ScenarioKind::kIntraGranuleOverflow: {
      u64 size;
      do {
        size = Uniform(rng, 1, 4 * cfg.tg);
      } while (size % cfg.tg == 0);
      s.sizes = {size};
      s.offset = static_cast<int64_t>(
          Uniform(rng, size, RoundUpTo(size, cfg.tg) - 1));
      break;
    }
    case ScenarioKind::kUseAfterReturn:
    case ScenarioKind::kUseAfterScope: {
      const u64 n = Uniform(rng, 1, 4);
      for (u64 i = 0; i < n; ++i) s.sizes.push_back(Uniform(rng, 1, 64));
      s.victim = Uniform(rng, 0, n - 1);
      s.offset = static_cast<int64_t>(Uniform(rng, 0, s.sizes[s.victim] - 1));
      break;
    }
    case ScenarioKind::kUninitializedRead: {
      s.sizes = {Uniform(rng, 1, 256)};
      s.offset = static_cast<int64_t>(Uniform(rng, 0, s.sizes[0] - 1));
      s.bug_access = AccessKind::kLoad;
      break;
    }
  }
  return s;
}

DetectionReport EstimateDetection(const EstimateOptions& opts,
                                  const MtConfig& cfg) {
  if (opts.trials == 0) throw UsageError("trials must be at least 1");
  cfg.Validate();

  DetectionReport report;
  report.kind = opts.kind;
  report.policy = opts.policy;
  report.trials = opts.trials;
  report.config = cfg;
  report.force_reuse = opts.force_reuse;

  for (u64 i = 0; i < opts.trials; ++i) {
    if (RunScenario(MakeTrialScenario(opts, cfg, i), cfg).detected)
      ++report.detections;
  }
  report.rate = static_cast<double>(report.detections) /
                static_cast<double>(report.trials);

  if (IsTagCollisionKind(opts)) {
    const double all = static_cast<double>(cfg.TagCount());
    const double usable = cfg.UsableTagCount();
    report.theoretical = (all - 1) / all;
    report.model = (usable - 1) / usable;
  }
  return report;
}

}  // namespace mtsim
