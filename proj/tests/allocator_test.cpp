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

#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "mtsim/access.h"
#include "mtsim/allocator.h"
#include "mtsim/errors.h"
#include "mtsim/precision.h"

namespace mtsim {
namespace {

MtConfig Cfg(u64 tg = 16, unsigned ts = 8) {
  MtConfig cfg;
  cfg.tg = tg;
  cfg.ts = ts;
  return cfg;
}

TEST(AllocatorTest, MallocTagsWholeGranules) {
  TaggedMemory mem(Cfg(), 1);
  HeapAllocator heap(mem);
  const TaggedPtr p = heap.Malloc(10, TagPolicy::Random());
  const uptr a = AddressOf(p);
  const Tag t = TagOf(p, mem.cfg());
  EXPECT_EQ(a % 16, 0u);
  EXPECT_NE(t, kUntagged);
  EXPECT_EQ(mem.shadow().GetTag(a), t);
  EXPECT_EQ(mem.shadow().GetTag(a + 16), kUntagged);
  EXPECT_EQ(heap.FindChunk(a)->aligned, 16u);
}

TEST(AllocatorTest, MallocZeroIsOneByte) {
  TaggedMemory mem(Cfg(), 1);
  HeapAllocator heap(mem);
  const TaggedPtr p = heap.Malloc(0, TagPolicy::Random());
  const Chunk* c = heap.FindChunk(AddressOf(p));
  EXPECT_EQ(c->requested, 1u);
  EXPECT_EQ(c->aligned, 16u);
  EXPECT_NE(mem.shadow().GetTag(AddressOf(p)), kUntagged);
}

TEST(AllocatorTest, ExhaustionThrows) {
  TaggedMemory mem(Cfg(), 1);
  HeapAllocator heap(mem, HeapAllocator::kDefaultArenaBase, 64);
  heap.Malloc(48, TagPolicy::Random());
  EXPECT_THROW(heap.Malloc(32, TagPolicy::Random()), AllocationFailure);
  EXPECT_THROW(heap.Malloc(65, TagPolicy::Random()), AllocationFailure);
}

TEST(AllocatorTest, FillSentinelOrZero) {
  for (bool zero : {false, true}) {
    MtConfig cfg = Cfg();
    cfg.zero_on_tag = zero;
    TaggedMemory mem(cfg, 1);
    HeapAllocator heap(mem);
    AccessEngine engine(mem, &heap);
    const TaggedPtr p = heap.Malloc(32, TagPolicy::Random());
    for (int i = 0; i < 32; ++i) {
      auto r = engine.Load(Advance(p, i, cfg), 1);
      ASSERT_FALSE(IsFault(r));
      EXPECT_EQ(std::get<LoadValue>(r).AsU64(), zero ? 0u : 0xAAu);
    }
  }
}

TEST(AllocatorTest, RightAlignEndsAtGranuleEnd) {
  MtConfig cfg = Cfg();
  cfg.right_align = true;
  TaggedMemory mem(cfg, 1);
  HeapAllocator heap(mem);
  const TaggedPtr p = heap.Malloc(10, TagPolicy::Random());
  EXPECT_EQ(AddressOf(p) % 16, 6u);
  EXPECT_EQ(heap.Free(p), std::nullopt);
}

TEST(AllocatorTest, FreeFaults) {
  MtConfig cfg = Cfg();
  TaggedMemory mem(cfg, 1);
  HeapAllocator heap(mem);
  const TaggedPtr p = heap.Malloc(32, TagPolicy::Random());
  const Tag t = TagOf(p, cfg);

  const Tag forged{static_cast<u8>(t.value == 1 ? 2 : 1)};
  auto r = heap.Free(Pack(AddressOf(p), forged, cfg));
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->kind, FaultKind::kInvalidFree);

  r = heap.Free(Advance(p, 16, cfg));
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->kind, FaultKind::kInvalidFree);

  r = heap.Free(Pack(0x1234, Tag{1}, cfg));
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->kind, FaultKind::kInvalidFree);
  EXPECT_FALSE(r->chunk_id.has_value());

  // None of the faulting frees changed anything.
  EXPECT_EQ(heap.stats().free_count, 0u);
  EXPECT_EQ(mem.shadow().GetTag(AddressOf(p)), t);

  EXPECT_EQ(heap.Free(p), std::nullopt);
  r = heap.Free(p);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->kind, FaultKind::kDoubleFree);
  EXPECT_EQ(r->chunk_state, ChunkState::kFreed);
}

TEST(AllocatorTest, RetagOnFreeDiffersFromLiveTag) {
  for (unsigned ts : {4u, 8u}) {
    TaggedMemory mem(Cfg(16, ts), 3);
    HeapAllocator heap(mem);
    for (int i = 0; i < 2000; ++i) {
      const TaggedPtr p = heap.Malloc(1 + i % 100, TagPolicy::Random());
      const Tag live = TagOf(p, mem.cfg());
      ASSERT_EQ(heap.Free(p), std::nullopt);
      const Tag now = mem.shadow().GetTag(AddressOf(p));
      ASSERT_NE(now, live);
      ASSERT_FALSE(IsReservedTag(now, mem.cfg()));
    }
  }
}

TEST(AllocatorTest, FirstFitReuseAndCoalescing) {
  TaggedMemory mem(Cfg(), 1);
  HeapAllocator heap(mem);
  const TaggedPtr a = heap.Malloc(16, TagPolicy::Random());
  const TaggedPtr b = heap.Malloc(16, TagPolicy::Random());
  heap.Malloc(16, TagPolicy::Random());
  heap.Free(a);
  heap.Free(b);
  // a and b coalesce into one 32-byte block at a.
  const TaggedPtr c = heap.Malloc(32, TagPolicy::Random());
  EXPECT_EQ(AddressOf(c), AddressOf(a));
}

TEST(AllocatorTest, QuarantineHoldsChunksUntilEvicted) {
  MtConfig cfg = Cfg();
  cfg.quarantine_capacity = 64;
  TaggedMemory mem(cfg, 1);
  HeapAllocator heap(mem);
  const TaggedPtr a = heap.Malloc(32, TagPolicy::Random());
  heap.Free(a);
  EXPECT_EQ(heap.stats().quarantine_bytes, 32u);
  EXPECT_EQ(heap.chunk(1).state, ChunkState::kQuarantined);
  const TaggedPtr b = heap.Malloc(32, TagPolicy::Random());
  EXPECT_NE(AddressOf(b), AddressOf(a));
  heap.Free(b);
  EXPECT_EQ(heap.stats().quarantine_chunks, 2u);
  // A third free pushes the quarantine over 64 bytes; a is evicted first.
  heap.Free(heap.Malloc(32, TagPolicy::Random()));
  EXPECT_EQ(heap.chunk(1).state, ChunkState::kFreed);
  EXPECT_EQ(heap.chunk(2).state, ChunkState::kQuarantined);
  EXPECT_LE(heap.stats().quarantine_bytes, 64u);
  EXPECT_EQ(heap.QuarantineFlush(), 2u);
  EXPECT_EQ(heap.stats().quarantine_bytes, 0u);
  EXPECT_EQ(AddressOf(heap.Malloc(32, TagPolicy::Random())), AddressOf(a));
}

TEST(AllocatorTest, StatsTrackLiveAndPeak) {
  TaggedMemory mem(Cfg(), 1);
  HeapAllocator heap(mem);
  const TaggedPtr a = heap.Malloc(10, TagPolicy::Random());
  const TaggedPtr b = heap.Malloc(20, TagPolicy::Random());
  EXPECT_EQ(heap.stats().live_requested, 30u);
  EXPECT_EQ(heap.stats().live_aligned, 48u);
  heap.Free(a);
  heap.Free(b);
  EXPECT_EQ(heap.stats().live_requested, 0u);
  EXPECT_EQ(heap.stats().peak_aligned, 48u);
  EXPECT_EQ(heap.stats().alloc_count, 2u);
  EXPECT_EQ(heap.stats().free_count, 2u);
}

// Random malloc/free interleavings: live chunks never overlap, are granule
// aligned and fully tagged with their own tag.
TEST(AllocatorTest, LayoutInvariantsUnderFuzz) {
  std::mt19937_64 rng(11);
  for (u64 tg : {16u, 32u, 64u}) {
    TaggedMemory mem(Cfg(tg, 4), rng());
    HeapAllocator heap(mem);
    std::vector<TaggedPtr> live;
    for (int step = 0; step < 3000; ++step) {
      if (live.empty() || rng() % 3 != 0) {
        live.push_back(heap.Malloc(rng() % 300, TagPolicy::Random()));
      } else {
        const size_t i = rng() % live.size();
        ASSERT_EQ(heap.Free(live[i]), std::nullopt);
        live.erase(live.begin() + i);
      }
    }
    uptr prev_end = 0;
    for (const Chunk* c : heap.LiveChunks()) {
      ASSERT_EQ(c->base % tg, 0u);
      ASSERT_EQ(c->aligned % tg, 0u);
      ASSERT_GE(c->aligned, c->requested);
      ASSERT_GE(c->base, prev_end);
      prev_end = c->end();
      for (uptr g = c->base; g < c->end(); g += tg)
        ASSERT_EQ(mem.shadow().GetTag(g), c->tag);
    }
    ASSERT_EQ(heap.LiveChunks().size(), live.size());
  }
}

TEST(AllocatorTest, AdjacentDistinctNeighborsDiffer) {
  std::mt19937_64 rng(5);
  for (unsigned ts : {4u, 8u}) {
    MtConfig cfg = Cfg(16, ts);
    TaggedMemory mem(cfg, rng());
    HeapAllocator heap(mem);
    std::vector<TaggedPtr> live;
    for (int step = 0; step < 4000; ++step) {
      if (live.empty() || rng() % 3 != 0) {
        live.push_back(heap.Malloc(1 + rng() % 80, TagPolicy::AdjacentDistinct()));
      } else {
        const size_t i = rng() % live.size();
        ASSERT_EQ(heap.Free(live[i]), std::nullopt);
        live.erase(live.begin() + i);
      }
      // Every live chunk differs from the granules right outside it.
      for (const Chunk* c : heap.LiveChunks()) {
        const Tag left = mem.shadow().GetTag(c->base - 16);
        const Tag right = mem.shadow().GetTag(c->end());
        if (c->base > heap.arena_begin()) {
          ASSERT_NE(left, c->tag);
        }
        ASSERT_NE(right, c->tag);
      }
    }
  }
}

// A dangling pointer is caught every time while its chunk sits in the
// quarantine, whatever the seed.
TEST(AllocatorTest, DanglingAccessDeterministicBeforeReuse) {
  MtConfig cfg = Cfg(16, 4);
  cfg.quarantine_capacity = 1 << 20;
  for (u64 seed = 0; seed < 2000; ++seed) {
    TaggedMemory mem(cfg, seed);
    HeapAllocator heap(mem);
    AccessEngine engine(mem, &heap);
    const TaggedPtr p = heap.Malloc(1 + seed % 200, TagPolicy::Random());
    heap.Malloc(24, TagPolicy::Random());
    heap.Free(p);
    heap.Malloc(1 + seed % 200, TagPolicy::Random());
    auto r = engine.Load(p, 1);
    ASSERT_TRUE(IsFault(r)) << seed;
    EXPECT_EQ(std::get<FaultReport>(r).chunk_state, ChunkState::kQuarantined);
  }
}

// After reuse the stale pointer meets an independently chosen tag: it
// survives with probability 1/usable.
TEST(AllocatorTest, ReuseCollisionRate) {
  const MtConfig cfg = Cfg(16, 4);
  const int trials = 30000;
  int collisions = 0;
  for (int i = 0; i < trials; ++i) {
    TaggedMemory mem(cfg, 1000 + i);
    HeapAllocator heap(mem);
    const TaggedPtr p = heap.Malloc(32, TagPolicy::Random());
    heap.Free(p);
    const TaggedPtr q = heap.Malloc(32, TagPolicy::Random());
    ASSERT_EQ(AddressOf(p), AddressOf(q));
    if (TagOf(p, cfg) == TagOf(q, cfg)) ++collisions;
  }
  const double expect = 1.0 / cfg.UsableTagCount();
  const double sigma = std::sqrt(expect * (1 - expect) / trials);
  EXPECT_NEAR(static_cast<double>(collisions) / trials, expect, 4 * sigma);
}

TEST(AllocatorTest, SampledPolicyProportion) {
  for (double rate : {0.0, 0.1, 0.5, 1.0}) {
    TaggedMemory mem(Cfg(), 77);
    HeapAllocator heap(mem);
    const int n = 20000;
    for (int i = 0; i < n; ++i) heap.Malloc(16, TagPolicy::Sampled(rate));
    const double got = static_cast<double>(heap.stats().tagged_count) / n;
    const double sigma = std::sqrt(rate * (1 - rate) / n);
    EXPECT_NEAR(got, rate, 4 * sigma + 1e-12);
  }
}

TEST(AllocatorTest, UntaggedAllocationsWriteNoShadow) {
  TaggedMemory mem(Cfg(), 1);
  HeapAllocator heap(mem);
  for (int i = 0; i < 100; ++i) heap.Malloc(64, TagPolicy::Sampled(0.0));
  EXPECT_EQ(mem.shadow().granule_writes(), 0u);
  EXPECT_EQ(heap.stats().tagged_count, 0u);
}

TEST(AllocatorTest, UntaggedReuseClearsStaleTags) {
  TaggedMemory mem(Cfg(), 1);
  HeapAllocator heap(mem);
  AccessEngine engine(mem, &heap);
  heap.Free(heap.Malloc(64, TagPolicy::Random()));
  const TaggedPtr p = heap.Malloc(64, TagPolicy::Sampled(0.0));
  EXPECT_EQ(TagOf(p, mem.cfg()), kUntagged);
  for (int i = 0; i < 64; ++i)
    ASSERT_FALSE(IsFault(engine.Load(Advance(p, i, mem.cfg()), 1)));
}

TEST(AllocatorTest, FindChunkReportsMostRecentOccupant) {
  TaggedMemory mem(Cfg(), 1);
  HeapAllocator heap(mem);
  const TaggedPtr a = heap.Malloc(32, TagPolicy::Random());
  heap.Free(a);
  const TaggedPtr b = heap.Malloc(16, TagPolicy::Random());
  EXPECT_EQ(heap.FindChunk(AddressOf(b))->id, 2u);
  // b displaced a, so the rest of a's old block has no owner.
  EXPECT_EQ(heap.FindChunk(AddressOf(a) + 16), nullptr);
  EXPECT_EQ(heap.FindChunk(heap.arena_begin() - 1), nullptr);
}

}  // namespace
}  // namespace mtsim
