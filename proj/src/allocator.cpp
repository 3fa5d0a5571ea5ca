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

#include "mtsim/allocator.h"

#include <algorithm>
#include <string>

#include "mtsim/errors.h"
#include "mtsim/precision.h"

namespace mtsim {

namespace {

constexpr u8 kUninitializedFill = 0xAA;

}  // namespace

std::string_view TagPolicyName(TagPolicyKind kind) {
  switch (kind) {
    case TagPolicyKind::kRandom: return "random";
    case TagPolicyKind::kAdjacentDistinct: return "adjacent-distinct";
    case TagPolicyKind::kSampled: return "sampled";
  }
  return "?";
}

HeapAllocator::HeapAllocator(TaggedMemory& mem, uptr arena_base,
                             u64 arena_size)
    : mem_(mem),
      cfg_(mem.cfg()),
      arena_begin_(RoundUpTo(arena_base, mem.cfg().tg)),
      arena_end_(arena_base + arena_size),
      bump_(arena_begin_) {
  if (arena_end_ > kAddressLimit || arena_end_ <= arena_begin_)
    throw UsageError("heap arena does not fit the simulated address space");
}

TaggedPtr HeapAllocator::Malloc(u64 size, const TagPolicy& policy,
                                std::string_view site) {
  const u64 requested = std::max<u64>(size, 1);
  if (requested > arena_end_ - arena_begin_)
    throw AllocationFailure("malloc(" + std::to_string(size) +
                            ") exceeds the arena");
  const u64 aligned = RoundUpTo(requested, cfg_.tg);
  const uptr base = TakeBlock(aligned);

  Chunk c;
  c.id = chunks_.size() + 1;
  c.base = base;
  c.requested = requested;
  c.aligned = aligned;
  c.policy = policy.kind;
  c.alloc_site = site;

  bool tagged = true;
  if (policy.kind == TagPolicyKind::kSampled) tagged = mem_.Chance(policy.rate);
  if (tagged) {
    if (policy.kind == TagPolicyKind::kAdjacentDistinct) {
      const Tag left =
          base > arena_begin_ ? NeighborTag(base - cfg_.tg) : kUntagged;
      const Tag right = NeighborTag(base + aligned);
      c.tag = mem_.RandomTag({left, right});
    } else {
      c.tag = mem_.RandomTag();
    }
  }

  mem_.memory().Fill(base, aligned,
                     cfg_.zero_on_tag ? u8{0} : kUninitializedFill);
  if (c.tagged())
    TagChunk(c);
  else
    ClearStaleTags(base, aligned);
  if (c.partial) ++stats_.partial_granules;

  c.user_begin = base;
  if (cfg_.right_align) c.user_begin = base + (aligned - requested);

  // Drop records of older chunks whose blocks this one overlaps.
  auto it = occupants_.lower_bound(base);
  if (it != occupants_.begin()) {
    auto prev = std::prev(it);
    if (chunk(prev->second).end() > base) it = prev;
  }
  while (it != occupants_.end() && it->first < base + aligned)
    it = occupants_.erase(it);
  occupants_.emplace(base, c.id);

  ++stats_.alloc_count;
  if (c.tagged()) ++stats_.tagged_count;
  stats_.live_requested += requested;
  stats_.live_aligned += aligned;
  NoteLiveChange();

  const TaggedPtr result = Pack(c.user_begin, c.tag, cfg_);
  chunks_.push_back(std::move(c));
  return result;
}

std::optional<FaultReport> HeapAllocator::Free(TaggedPtr p,
                                               std::string_view site) {
  const uptr addr = AddressOf(p);
  const Tag ptr_tag = TagOf(p, cfg_);

  FaultReport report;
  report.access = AccessKind::kFree;
  report.word = p;
  report.ptr_tag = ptr_tag;
  report.mem_tag = mem_.shadow().GetTag(addr);
  report.granule_base = GranuleBase(addr, cfg_);

  const Chunk* found = FindChunk(addr);
  if (found) {
    report.chunk_id = found->id;
    report.chunk_state = found->state;
  }
  if (!found || found->user_begin != addr) {
    report.kind = FaultKind::kInvalidFree;
    return report;
  }
  if (found->state != ChunkState::kLive) {
    report.kind = FaultKind::kDoubleFree;
    return report;
  }
  if (ptr_tag != found->tag) {
    report.kind = FaultKind::kInvalidFree;
    return report;
  }

  Chunk& c = chunks_[found->id - 1];
  c.free_site = site;
  ++stats_.free_count;
  stats_.live_requested -= c.requested;
  stats_.live_aligned -= c.aligned;

  if (c.tagged()) {
    Tag exclude[3] = {c.tag, kUntagged, kUntagged};
    if (c.policy == TagPolicyKind::kAdjacentDistinct) {
      if (c.base > arena_begin_) exclude[1] = NeighborTag(c.base - cfg_.tg);
      exclude[2] = NeighborTag(c.end());
    }
    mem_.shadow().SetTagRange(c.base, c.aligned, mem_.RandomTag(exclude));
  }

  if (cfg_.quarantine_capacity > 0) {
    c.state = ChunkState::kQuarantined;
    quarantine_.push_back(c.id);
    stats_.quarantine_bytes += c.aligned;
    ++stats_.quarantine_chunks;
    while (stats_.quarantine_bytes > cfg_.quarantine_capacity) Evict();
  } else {
    c.state = ChunkState::kFreed;
    ReleaseBlock(c.base, c.aligned);
  }
  return std::nullopt;
}

size_t HeapAllocator::QuarantineFlush() {
  size_t released = 0;
  while (!quarantine_.empty()) {
    Evict();
    ++released;
  }
  return released;
}

const Chunk* HeapAllocator::FindChunk(uptr addr) const {
  auto it = occupants_.upper_bound(addr);
  if (it == occupants_.begin()) return nullptr;
  --it;
  const Chunk& c = chunk(it->second);
  return addr < c.end() ? &c : nullptr;
}

std::vector<const Chunk*> HeapAllocator::LiveChunks() const {
  std::vector<const Chunk*> live;
  for (const auto& [base, id] : occupants_) {
    const Chunk& c = chunk(id);
    if (c.state == ChunkState::kLive) live.push_back(&c);
  }
  return live;
}

uptr HeapAllocator::TakeBlock(u64 size) {
  for (auto it = free_blocks_.begin(); it != free_blocks_.end(); ++it) {
    if (it->second < size) continue;
    const uptr base = it->first;
    const u64 rest = it->second - size;
    free_blocks_.erase(it);
    if (rest > 0) free_blocks_.emplace(base + size, rest);
    return base;
  }
  if (size > arena_end_ - bump_)
    throw AllocationFailure("heap arena exhausted");
  const uptr base = bump_;
  bump_ += size;
  return base;
}

void HeapAllocator::ReleaseBlock(uptr base, u64 size) {
  auto next = free_blocks_.lower_bound(base);
  if (next != free_blocks_.end() && next->first == base + size) {
    size += next->second;
    next = free_blocks_.erase(next);
  }
  if (next != free_blocks_.begin()) {
    auto prev = std::prev(next);
    if (prev->first + prev->second == base) {
      prev->second += size;
      return;
    }
  }
  free_blocks_.emplace(base, size);
}

void HeapAllocator::Evict() {
  const u64 id = quarantine_.front();
  quarantine_.pop_front();
  Chunk& c = chunks_[id - 1];
  stats_.quarantine_bytes -= c.aligned;
  --stats_.quarantine_chunks;
  c.state = ChunkState::kFreed;
  ReleaseBlock(c.base, c.aligned);
}

Tag HeapAllocator::NeighborTag(uptr granule_addr) const {
  if (granule_addr < arena_begin_ || granule_addr >= bump_) return kUntagged;
  return EffectiveTag(mem_, granule_addr);
}

void HeapAllocator::TagChunk(Chunk& c) {
  const u64 tail = c.requested % cfg_.tg;
  if (cfg_.precision_ext && tail != 0) {
    if (tail <= MaxPartialBytes(cfg_)) {
      if (c.aligned > cfg_.tg)
        mem_.shadow().SetTagRange(c.base, c.aligned - cfg_.tg, c.tag);
      MarkPartial(mem_, c.end() - cfg_.tg, tail, c.tag);
      c.partial = true;
      return;
    }
    ++stats_.partial_fallbacks;
  }
  mem_.shadow().SetTagRange(c.base, c.aligned, c.tag);
}

void HeapAllocator::ClearStaleTags(uptr base, u64 len) {
  for (uptr g = base; g < base + len; g += cfg_.tg) {
    if (mem_.shadow().GetTag(g) != kUntagged)
      mem_.shadow().SetTagRange(g, cfg_.tg, kUntagged);
  }
}

void HeapAllocator::NoteLiveChange() {
  stats_.peak_requested = std::max(stats_.peak_requested, stats_.live_requested);
  stats_.peak_aligned = std::max(stats_.peak_aligned, stats_.live_aligned);
}

}  // namespace mtsim
