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

#ifndef MTSIM_FAULT_H_
#define MTSIM_FAULT_H_

#include <optional>
#include <string>
#include <string_view>

#include "mtsim/tag.h"

namespace mtsim {

enum class FaultKind { kTagMismatch, kInvalidFree, kDoubleFree, kUsageError };
enum class AccessKind { kLoad, kStore, kRangeCheck, kFree };
enum class ChunkState { kLive, kQuarantined, kFreed };

std::string_view FaultKindName(FaultKind kind);
std::string_view AccessKindName(AccessKind kind);
std::string_view ChunkStateName(ChunkState state);

struct FaultReport {
  FaultKind kind = FaultKind::kTagMismatch;
  AccessKind access = AccessKind::kLoad;
  TaggedPtr word;  // the faulting pointer word
  Tag ptr_tag;
  Tag mem_tag;  // shadow value of the offending granule
  uptr granule_base = 0;
  std::optional<u64> chunk_id;  // heap chunk covering the offending byte
  std::optional<ChunkState> chunk_state;
  bool deferred = false;
  bool partial_granule = false;  // rejected by the partial-granule rule
};

// FAULT kind=<k> access=<a> ptr=0x<word> ptag=0x<t> mtag=0x<m> chunk=<id|->
//   state=<s> deferred=<0|1>
// (one line, no trailing newline)
std::string RenderPlain(const FaultReport& report);
// Same keys as the plain form, as a compact JSON object.
std::string RenderJson(const FaultReport& report);

}  // namespace mtsim

#endif  // MTSIM_FAULT_H_
