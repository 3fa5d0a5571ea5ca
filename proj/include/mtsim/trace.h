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

#ifndef MTSIM_TRACE_H_
#define MTSIM_TRACE_H_

#include <istream>
#include <span>
#include <vector>

#include "mtsim/config.h"

namespace mtsim {

// One line of an allocation trace. Grammar, decimal integers, single spaces:
//
//   a <id> <size>\n
//   f <id>\n
//
// Lines starting with '#' and empty lines are ignored.
struct TraceEvent {
  enum class Op { kAlloc, kFree };
  Op op = Op::kAlloc;
  u64 id = 0;
  u64 size = 0;  // kAlloc only
  size_t line = 0;  // 1-based source line, for error messages
};

// Throws InputError naming the offending line.
std::vector<TraceEvent> ParseTrace(std::istream& in);

struct OverheadRow {
  u64 alignment = 0;
  u64 peak_bytes = 0;  // peak live bytes with every size rounded up
  double overhead_pct = 0;  // vs. the 8-byte row
  double tag_storage_bytes = 0;  // peak_bytes * ts / (8 * alignment)
};

struct OverheadReport {
  unsigned ts = 8;
  std::vector<OverheadRow> rows;  // 8-byte base first, then as requested
};

inline constexpr u64 kBaseAlignment = 8;

// Replays the trace once per alignment. Each live allocation contributes
// its size rounded up to the alignment (at least one alignment unit).
// Throws InputError for a free of an unknown id or a duplicate live id, and
// UsageError for an alignment that is not a power of two >= 8.
OverheadReport AnalyzeTrace(std::span<const TraceEvent> events,
                            std::span<const u64> alignments, unsigned ts);

}  // namespace mtsim

#endif  // MTSIM_TRACE_H_
