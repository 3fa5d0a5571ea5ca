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

#ifndef MTSIM_ALLOCATOR_H_
#define MTSIM_ALLOCATOR_H_

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtsim/fault.h"
#include "mtsim/tagged_memory.h"

namespace mtsim {

enum class TagPolicyKind { kRandom, kAdjacentDistinct, kSampled };

std::string_view TagPolicyName(TagPolicyKind kind);

// How malloc picks a tag. Sampled tags a `rate` fraction of allocations
// (with a random tag) and leaves the rest untagged.
struct TagPolicy {
  TagPolicyKind kind = TagPolicyKind::kRandom;
  double rate = 1.0;

  static TagPolicy Random() { return {TagPolicyKind::kRandom, 1.0}; }
  static TagPolicy AdjacentDistinct() {
    return {TagPolicyKind::kAdjacentDistinct, 1.0};
  }
  static TagPolicy Sampled(double rate) {
    return {TagPolicyKind::kSampled, rate};
  }
};

struct Chunk {
  u64 id = 0;  // allocation sequence number, starting at 1
  uptr base = 0;  // granule aligned start of the block
  uptr user_begin = 0;  // what malloc returned (differs with right_align)
  u64 requested = 0;  // malloc(0) is recorded as 1
  u64 aligned = 0;
  Tag tag;  // kUntagged for allocations skipped by sampling
  ChunkState state = ChunkState::kLive;
  TagPolicyKind policy = TagPolicyKind::kRandom;
  bool partial = false;  // last granule is a partial granule
  std::string alloc_site;
  std::string free_site;

  bool tagged() const { return tag != kUntagged; }
  uptr end() const { return base + aligned; }
};

struct AllocatorStats {
  u64 live_requested = 0;
  u64 live_aligned = 0;
  u64 peak_requested = 0;
  u64 peak_aligned = 0;
  u64 alloc_count = 0;
  u64 free_count = 0;
  u64 tagged_count = 0;
  u64 quarantine_bytes = 0;
  u64 quarantine_chunks = 0;
  u64 partial_granules = 0;
  // Sizes whose tail was too long for a partial granule (tail > tg-2).
  u64 partial_fallbacks = 0;
};

// Tagged heap over a contiguous simulated arena.
//
// Placement is deterministic: first fit by address among released blocks,
// otherwise bump allocation. Freed chunks are retagged with a fresh tag that
// differs from their live tag, then either parked in a byte-bounded FIFO
// quarantine or released for reuse right away.
class HeapAllocator {
 public:
  static constexpr uptr kDefaultArenaBase = uptr{1} << 40;
  static constexpr u64 kDefaultArenaSize = u64{1} << 30;

  explicit HeapAllocator(TaggedMemory& mem,
                         uptr arena_base = kDefaultArenaBase,
                         u64 arena_size = kDefaultArenaSize);

  // Throws AllocationFailure when the arena cannot fit the request.
  TaggedPtr Malloc(u64 size, const TagPolicy& policy,
                   std::string_view site = {});
  // nullopt on success; an InvalidFree/DoubleFree report otherwise. A
  // faulting free changes nothing.
  std::optional<FaultReport> Free(TaggedPtr p, std::string_view site = {});
  // Releases every quarantined chunk, oldest first. Returns how many.
  size_t QuarantineFlush();

  const AllocatorStats& stats() const { return stats_; }

  // The most recent chunk whose block covers `addr`, if any.
  const Chunk* FindChunk(uptr addr) const;
  const Chunk& chunk(u64 id) const { return chunks_.at(id - 1); }
  std::vector<const Chunk*> LiveChunks() const;

  uptr arena_begin() const { return arena_begin_; }
  uptr arena_end() const { return arena_end_; }

 private:
  uptr TakeBlock(u64 size);
  void ReleaseBlock(uptr base, u64 size);
  void Evict();
  Tag NeighborTag(uptr granule_addr) const;
  void TagChunk(Chunk& c);
  void ClearStaleTags(uptr base, u64 len);
  void NoteLiveChange();

  TaggedMemory& mem_;
  const MtConfig& cfg_;
  uptr arena_begin_;
  uptr arena_end_;
  uptr bump_;
  std::vector<Chunk> chunks_;
  std::map<uptr, u64> occupants_;  // block base -> chunk id, disjoint ranges
  std::map<uptr, u64> free_blocks_;  // base -> size, coalesced
  std::deque<u64> quarantine_;
  AllocatorStats stats_;
};

}  // namespace mtsim

#endif  // MTSIM_ALLOCATOR_H_
