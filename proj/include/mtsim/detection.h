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

#ifndef MTSIM_DETECTION_H_
#define MTSIM_DETECTION_H_

#include <optional>

#include "mtsim/scenario.h"

namespace mtsim {

struct EstimateOptions {
  ScenarioKind kind = ScenarioKind::kHeapUseAfterFree;
  TagPolicy policy = TagPolicy::Random();
  u64 trials = 10000;
  u64 seed = 1;
  // heap-uaf only: free, flush the quarantine and allocate the same size
  // again, so the stale pointer meets a freshly chosen tag. Without it the
  // stale pointer only ever meets the retag-on-free tag.
  bool force_reuse = true;
  AccessKind bug_access = AccessKind::kLoad;
};

struct DetectionReport {
  ScenarioKind kind;
  TagPolicy policy;
  u64 trials = 0;
  u64 detections = 0;
  double rate = 0;
  // (2^ts - 1) / 2^ts for kinds whose outcome is a collision between two
  // independently chosen random tags; absent otherwise.
  std::optional<double> theoretical;
  // The exact collision-free probability of the simulated tag model: tags
  // are drawn from the usable (non-reserved) values only.
  std::optional<double> model;
  MtConfig config;
  bool force_reuse = true;
};

// Seed for trial `index` of a run seeded with `seed`. Trials only depend on
// their own seed, so any execution order gives the same totals.
u64 TrialSeed(u64 seed, u64 index);

// The randomized scenario instance used for trial `index`. Parameter
// distributions (all uniform):
//   heap-uaf             0..3 other chunks of 1..256 bytes, victim of 1..256
//                        bytes, offset in the victim; reuse depth 1 (forced)
//                        or 1..3 without forced reuse
//   linear-*             1..6 chunks of 1..4*tg bytes, random victim
//   non-linear-overflow  source, 1..4 fillers and target of 1..256 bytes,
//                        random offset inside the target
//   intra-granule        size 1..4*tg that is not a granule multiple, offset
//                        in the slack of its last granule
//   use-after-*          1..4 locals of 1..64 bytes, random victim and offset
//   uninit-read          1..256 bytes, random offset
Scenario MakeTrialScenario(const EstimateOptions& opts, const MtConfig& cfg,
                           u64 index);

DetectionReport EstimateDetection(const EstimateOptions& opts,
                                  const MtConfig& cfg);

}  // namespace mtsim

#endif  // MTSIM_DETECTION_H_
