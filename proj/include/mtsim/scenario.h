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

#ifndef MTSIM_SCENARIO_H_
#define MTSIM_SCENARIO_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtsim/allocator.h"
#include "mtsim/fault.h"

namespace mtsim {

enum class ScenarioKind {
  kHeapUseAfterFree,
  kLinearOverflow,
  kLinearUnderflow,
  kNonLinearOverflow,
  kIntraGranuleOverflow,
  kUseAfterReturn,
  kUseAfterScope,
  kUninitializedRead,
};

inline constexpr ScenarioKind kAllScenarioKinds[] = {
    ScenarioKind::kHeapUseAfterFree,     ScenarioKind::kLinearOverflow,
    ScenarioKind::kLinearUnderflow,      ScenarioKind::kNonLinearOverflow,
    ScenarioKind::kIntraGranuleOverflow, ScenarioKind::kUseAfterReturn,
    ScenarioKind::kUseAfterScope,        ScenarioKind::kUninitializedRead,
};

// Command-line names: heap-uaf, linear-overflow, linear-underflow,
// non-linear-overflow, intra-granule, use-after-return, use-after-scope,
// uninit-read.
std::string_view ScenarioName(ScenarioKind kind);
std::optional<ScenarioKind> ParseScenarioName(std::string_view name);

// One injected bug. What `sizes`, `victim` and `offset` mean depends on the
// kind:
//
//   heap-uaf             chunks sizes[i] are allocated in order, sizes[victim]
//                        is freed, then reuse_depth more chunks of the same
//                        size are allocated (after a quarantine flush if
//                        flush_before_reuse). Bug: access stale ptr + offset.
//   linear-overflow      chunks sizes[i], wrapped in one granule-sized fence
//   linear-underflow     chunk on each side. Bug: victim ptr + offset; the
//   intra-granule        default offset is the first byte of the next granule
//                        (overflow), -1 (underflow), or the first byte past
//                        the object (intra-granule).
//   non-linear-overflow  chunks sizes[i]; the source is sizes[0], the target
//                        sizes[victim] (victim >= 1). Bug: source ptr moved
//                        onto target + offset.
//   use-after-return     locals sizes[i] in one frame; ptr to local victim is
//                        kept, the frame exits and is re-entered reuse_depth
//                        times. Bug: stale ptr + offset.
//   use-after-scope      locals sizes[i]; local victim goes out of scope.
//   uninit-read          chunk sizes[victim] is written, freed and allocated
//                        again; "detected" means the read at offset saw 0.
struct Scenario {
  ScenarioKind kind = ScenarioKind::kHeapUseAfterFree;
  TagPolicy policy = TagPolicy::Random();
  std::vector<u64> sizes;  // empty: kind default
  size_t victim = 0;
  std::optional<int64_t> offset;
  unsigned reuse_depth = 0;
  bool flush_before_reuse = false;
  AccessKind bug_access = AccessKind::kLoad;  // kLoad or kStore
  u64 seed = 0;
};

// Fills in per-kind defaults for an otherwise empty scenario (sizes, victim,
// reuse).
Scenario DefaultScenario(ScenarioKind kind);

struct ScenarioOutcome {
  bool detected = false;
  std::optional<FaultReport> report;
  std::optional<u8> observed;  // uninit-read: the byte the read returned
  std::vector<std::string> log;  // human-readable step trace
};

// Runs against a fresh Simulator seeded with s.seed. Throws UsageError for
// malformed parameters and HarnessError if anything other than the bug
// access faults. `trace` fills ScenarioOutcome::log.
ScenarioOutcome RunScenario(const Scenario& s, const MtConfig& cfg,
                            bool trace = false);

}  // namespace mtsim

#endif  // MTSIM_SCENARIO_H_
