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

#include "mtsim/fault.h"

#include <cinttypes>
#include <cstdio>

#include "json.hpp"

namespace mtsim {

std::string_view FaultKindName(FaultKind kind) {
  switch (kind) {
    case FaultKind::kTagMismatch: return "tag-mismatch";
    case FaultKind::kInvalidFree: return "invalid-free";
    case FaultKind::kDoubleFree: return "double-free";
    case FaultKind::kUsageError: return "usage-error";
  }
  return "?";
}

std::string_view AccessKindName(AccessKind kind) {
  switch (kind) {
    case AccessKind::kLoad: return "load";
    case AccessKind::kStore: return "store";
    case AccessKind::kRangeCheck: return "range-check";
    case AccessKind::kFree: return "free";
  }
  return "?";
}

std::string_view ChunkStateName(ChunkState state) {
  switch (state) {
    case ChunkState::kLive: return "live";
    case ChunkState::kQuarantined: return "quarantined";
    case ChunkState::kFreed: return "freed";
  }
  return "?";
}

namespace {

std::string Hex(u64 v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%0*" PRIx64, width, v);
  return buf;
}

std::string ChunkField(const FaultReport& r) {
  return r.chunk_id ? std::to_string(*r.chunk_id) : "-";
}

std::string StateField(const FaultReport& r) {
  return r.chunk_state ? std::string(ChunkStateName(*r.chunk_state)) : "none";
}

}  // namespace

std::string RenderPlain(const FaultReport& r) {
  std::string out = "FAULT kind=";
  out += FaultKindName(r.kind);
  out += " access=";
  out += AccessKindName(r.access);
  out += " ptr=" + Hex(r.word.word, 16);
  out += " ptag=" + Hex(r.ptr_tag.value, 2);
  out += " mtag=" + Hex(r.mem_tag.value, 2);
  out += " chunk=" + ChunkField(r);
  out += " state=" + StateField(r);
  out += r.deferred ? " deferred=1" : " deferred=0";
  return out;
}

std::string RenderJson(const FaultReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = FaultKindName(r.kind);
  j["access"] = AccessKindName(r.access);
  j["ptr"] = Hex(r.word.word, 16);
  j["ptag"] = Hex(r.ptr_tag.value, 2);
  j["mtag"] = Hex(r.mem_tag.value, 2);
  j["chunk"] = ChunkField(r);
  j["state"] = StateField(r);
  j["deferred"] = r.deferred ? 1 : 0;
  return j.dump();
}

}  // namespace mtsim
