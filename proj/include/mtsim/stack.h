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

#ifndef MTSIM_STACK_H_
#define MTSIM_STACK_H_

#include <span>
#include <vector>

#include "mtsim/tagged_memory.h"

namespace mtsim {

enum class ScopeState { kInScope, kOutOfScope };

struct LocalSlot {
  u64 offset = 0;  // from the frame base
  u64 declared = 0;
  u64 aligned = 0;
  Tag tag;
  ScopeState state = ScopeState::kInScope;
};

struct Frame {
  u64 id = 0;  // frame sequence number
  uptr base = 0;  // lowest address of the frame
  Tag base_tag;
  std::vector<LocalSlot> locals;
  u64 original_size = 0;
  u64 aligned_size = 0;

  // The tagged pointer the instrumented prologue hands out for local `i`.
  TaggedPtr LocalPtr(size_t i, const MtConfig& cfg) const;
};

struct FrameOverhead {
  u64 original = 0;
  u64 aligned = 0;
  double percent = 0;  // 0 when original is 0
};

FrameOverhead ComputeFrameOverhead(const Frame& f);
// Same arithmetic without building a frame.
FrameOverhead FrameOverheadFor(std::span<const u64> local_sizes, u64 tg);

// Semi-random frame tag: a hash of (frame base, frame sequence, seed). Pure.
Tag DeriveFrameTag(uptr frame_base, u64 sequence, u64 seed,
                   const MtConfig& cfg);

// Stands in for compiler-inserted prologue/epilogue code. Frames are carved
// downward from `stack_top`; each local is padded to whole granules and gets
// base_tag + slot index (over the usable tags), so sibling locals differ.
class StackTagger {
 public:
  static constexpr uptr kDefaultStackTop = uptr{0x7f} << 40;
  static constexpr u64 kDefaultStackSize = u64{8} << 20;

  StackTagger(TaggedMemory& mem, u64 seed,
              uptr stack_top = kDefaultStackTop,
              u64 stack_size = kDefaultStackSize);

  // Throws AllocationFailure on simulated stack overflow and UsageError if
  // the frame has more locals than distinct tags allow (usable - 1, leaving
  // one tag for the epilogue).
  Frame EnterFrame(std::span<const u64> local_sizes);
  // LIFO only; UsageError otherwise. Retags every slot with one tag distinct
  // from all slot tags of the frame.
  void ExitFrame(const Frame& f);
  // Retags one slot with a tag distinct from its live tag.
  void EndScope(Frame& f, size_t slot);

  size_t depth() const { return frames_.size(); }
  uptr stack_pointer() const { return sp_; }

 private:
  Frame& Top(const Frame& f, const char* op);

  TaggedMemory& mem_;
  u64 seed_;
  uptr top_;
  uptr limit_;
  uptr sp_;
  u64 next_sequence_ = 1;
  std::vector<Frame> frames_;
};

}  // namespace mtsim

#endif  // MTSIM_STACK_H_
