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

#include "mtsim/stack.h"

#include <algorithm>
#include <string>

#include "mtsim/errors.h"
#include "mtsim/mix.h"

namespace mtsim {

TaggedPtr Frame::LocalPtr(size_t i, const MtConfig& cfg) const {
  const LocalSlot& slot = locals.at(i);
  return Pack(base + slot.offset, slot.tag, cfg);
}

FrameOverhead FrameOverheadFor(std::span<const u64> local_sizes, u64 tg) {
  FrameOverhead o;
  for (u64 size : local_sizes) {
    o.original += size;
    o.aligned += RoundUpTo(std::max<u64>(size, 1), tg);
  }
  if (o.original > 0)
    o.percent = 100.0 * static_cast<double>(o.aligned - o.original) /
                static_cast<double>(o.original);
  return o;
}

FrameOverhead ComputeFrameOverhead(const Frame& f) {
  FrameOverhead o;
  o.original = f.original_size;
  o.aligned = f.aligned_size;
  if (o.original > 0)
    o.percent = 100.0 * static_cast<double>(o.aligned - o.original) /
                static_cast<double>(o.original);
  return o;
}

Tag DeriveFrameTag(uptr frame_base, u64 sequence, u64 seed,
                   const MtConfig& cfg) {
  const u64 h = Mix64(frame_base ^ Mix64(sequence ^ Mix64(seed)));
  return UsableTagAt(static_cast<unsigned>(h % cfg.UsableTagCount()), cfg);
}

StackTagger::StackTagger(TaggedMemory& mem, u64 seed, uptr stack_top,
                         u64 stack_size)
    : mem_(mem),
      seed_(seed),
      top_(stack_top - stack_top % mem.cfg().tg),
      limit_(top_ - stack_size),
      sp_(top_) {
  if (stack_top >= kAddressLimit || stack_size > top_)
    throw UsageError("stack region does not fit the simulated address space");
}

Frame StackTagger::EnterFrame(std::span<const u64> local_sizes) {
  const MtConfig& cfg = mem_.cfg();
  const unsigned usable = cfg.UsableTagCount();
  if (local_sizes.size() > usable - 1)
    throw UsageError("frame has " + std::to_string(local_sizes.size()) +
                     " locals; at most " + std::to_string(usable - 1) +
                     " get distinct tags");

  Frame f;
  f.id = next_sequence_++;
  for (u64 size : local_sizes) {
    LocalSlot slot;
    slot.offset = f.aligned_size;
    slot.declared = size;
    slot.aligned = RoundUpTo(std::max<u64>(size, 1), cfg.tg);
    f.original_size += size;
    f.aligned_size += slot.aligned;
    f.locals.push_back(slot);
  }
  if (f.aligned_size > sp_ - limit_)
    throw AllocationFailure("simulated stack overflow");
  f.base = sp_ - f.aligned_size;

  f.base_tag = DeriveFrameTag(f.base, f.id, seed_, cfg);
  const unsigned first = UsableIndexOf(f.base_tag, cfg);
  for (size_t i = 0; i < f.locals.size(); ++i) {
    LocalSlot& slot = f.locals[i];
    slot.tag = UsableTagAt(static_cast<unsigned>((first + i) % usable), cfg);
    mem_.shadow().SetTagRange(f.base + slot.offset, slot.aligned, slot.tag);
  }

  sp_ = f.base;
  frames_.push_back(f);
  return f;
}

void StackTagger::ExitFrame(const Frame& f) {
  Frame& live = Top(f, "exit_frame");
  if (!live.locals.empty()) {
    std::vector<Tag> used;
    used.reserve(live.locals.size());
    for (const LocalSlot& slot : live.locals) used.push_back(slot.tag);
    const Tag retag = mem_.RandomTag(used);
    mem_.shadow().SetTagRange(live.base, live.aligned_size, retag);
  }
  sp_ = live.base + live.aligned_size;
  frames_.pop_back();
}

void StackTagger::EndScope(Frame& f, size_t slot_index) {
  Frame* live = nullptr;
  for (Frame& candidate : frames_) {
    if (candidate.id == f.id) live = &candidate;
  }
  if (!live) throw UsageError("end_scope on a frame that is not live");
  if (slot_index >= live->locals.size())
    throw UsageError("end_scope slot index out of range");
  LocalSlot& slot = live->locals[slot_index];
  if (slot.state == ScopeState::kOutOfScope)
    throw UsageError("end_scope on a slot that is already out of scope");

  mem_.shadow().SetTagRange(live->base + slot.offset, slot.aligned,
                            mem_.RandomTag({slot.tag}));
  slot.state = ScopeState::kOutOfScope;
  f.locals[slot_index].state = ScopeState::kOutOfScope;
}

Frame& StackTagger::Top(const Frame& f, const char* op) {
  if (frames_.empty() || frames_.back().id != f.id)
    throw UsageError(std::string(op) + " out of LIFO order");
  return frames_.back();
}

}  // namespace mtsim
