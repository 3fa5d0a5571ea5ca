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

#include "mtsim/access.h"

#include <algorithm>
#include <cerrno>

#include "mtsim/errors.h"
#include "mtsim/precision.h"

namespace mtsim {

namespace {

void CheckWidth(u64 width) {
  if (width != 1 && width != 2 && width != 4 && width != 8)
    throw UsageError("access width must be 1, 2, 4 or 8");
}

void CheckSpan(uptr addr, u64 len) {
  if (len > kAddressLimit - addr)
    throw UsageError("access wraps the simulated address space");
}

}  // namespace

LoadResult AccessEngine::Load(TaggedPtr p, unsigned width) {
  CheckWidth(width);
  if (auto fault = Check(p, width, AccessKind::kLoad)) return *fault;
  LoadValue v;
  v.width = width;
  mem_.memory().Read(AddressOf(p), std::span<u8>(v.bytes.data(), width));
  return v;
}

std::optional<FaultReport> AccessEngine::Store(TaggedPtr p,
                                               std::span<const u8> bytes) {
  CheckWidth(bytes.size());
  if (auto fault = Check(p, bytes.size(), AccessKind::kStore)) {
    if (mem_.cfg().store_mode == StoreMode::kPrecise) return fault;
    fault->deferred = true;
    deferred_.push_back(*fault);
    return std::nullopt;
  }
  mem_.memory().Write(AddressOf(p), bytes);
  return std::nullopt;
}

std::vector<FaultReport> AccessEngine::Sync() {
  std::vector<FaultReport> out;
  out.swap(deferred_);
  return out;
}

std::optional<RangeError> AccessEngine::CheckUserRange(TaggedPtr p,
                                                       u64 len) const {
  if (len == 0) return std::nullopt;
  if (auto fault = Check(p, len, AccessKind::kRangeCheck))
    return RangeError{EFAULT, fault->granule_base};
  return std::nullopt;
}

std::optional<FaultReport> AccessEngine::Check(TaggedPtr p, u64 len,
                                               AccessKind access) const {
  const MtConfig& cfg = mem_.cfg();
  const uptr addr = AddressOf(p);
  const Tag ptr_tag = TagOf(p, cfg);
  CheckSpan(addr, len);

  const uptr end = addr + len;
  for (uptr g = GranuleBase(addr, cfg); g < end; g += cfg.tg) {
    const Tag mem_tag = mem_.shadow().GetTag(g);
    const uptr lo = std::max(addr, g);
    const uptr hi = std::min(end, g + cfg.tg);
    bool ok;
    bool partial = false;
    if (cfg.precision_ext && mem_tag == PartialTag(cfg)) {
      partial = true;
      ok = CheckPartial(mem_, g, lo - g, hi - lo, ptr_tag);
    } else {
      ok = TagsMatch(ptr_tag, mem_tag);
    }
    if (ok) continue;

    FaultReport r;
    r.kind = FaultKind::kTagMismatch;
    r.access = access;
    r.word = p;
    r.ptr_tag = ptr_tag;
    r.mem_tag = mem_tag;
    r.granule_base = g;
    r.partial_granule = partial;
    if (heap_) {
      if (const Chunk* c = heap_->FindChunk(lo)) {
        r.chunk_id = c->id;
        r.chunk_state = c->state;
      }
    }
    return r;
  }
  return std::nullopt;
}

}  // namespace mtsim
