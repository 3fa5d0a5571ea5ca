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

#include "mtsim/tag.h"

#include <string>

#include "mtsim/errors.h"

namespace mtsim {

bool IsValidTag(Tag tag, const MtConfig& cfg) {
  return tag.value < cfg.TagCount();
}

bool IsReservedTag(Tag tag, const MtConfig& cfg) {
  return tag == kUntagged || (cfg.precision_ext && tag == PartialTag(cfg));
}

Tag UsableTagAt(unsigned index, const MtConfig& cfg) {
  if (index >= cfg.UsableTagCount())
    throw UsageError("usable tag index out of range");
  return Tag{static_cast<u8>(index + 1)};
}

unsigned UsableIndexOf(Tag tag, const MtConfig& cfg) {
  if (!IsValidTag(tag, cfg) || IsReservedTag(tag, cfg))
    throw UsageError("tag is reserved or out of range");
  return tag.value - 1u;
}

TaggedPtr Pack(uptr addr, Tag tag, const MtConfig& cfg) {
  if (!IsValidTag(tag, cfg))
    throw UsageError("tag " + std::to_string(tag.value) + " does not fit in " +
                     std::to_string(cfg.ts) + " bits");
  if (addr >= kAddressLimit)
    throw UsageError("address exceeds the 56-bit simulated address space");
  return TaggedPtr{addr | (u64{tag.value} << (64 - cfg.ts))};
}

std::pair<uptr, Tag> Unpack(TaggedPtr p, const MtConfig& cfg) {
  return {AddressOf(p), TagOf(p, cfg)};
}

TaggedPtr Advance(TaggedPtr p, int64_t delta, const MtConfig& cfg) {
  const uptr addr = AddressOf(p);
  const uptr moved = addr + static_cast<u64>(delta);
  if ((delta < 0 && u64{0} - static_cast<u64>(delta) > addr) ||
      (delta >= 0 && moved >= kAddressLimit))
    throw UsageError("pointer arithmetic leaves the simulated address space");
  return Pack(moved, TagOf(p, cfg), cfg);
}

}  // namespace mtsim
