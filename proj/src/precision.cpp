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

#include "mtsim/precision.h"

#include <string>

#include "mtsim/errors.h"

namespace mtsim {

void MarkPartial(TaggedMemory& mem, uptr granule_addr, u64 n, Tag real_tag) {
  const MtConfig& cfg = mem.cfg();
  if (!cfg.precision_ext)
    throw UsageError("partial granules need precision_ext");
  if (granule_addr % cfg.tg != 0)
    throw UsageError("partial granule address is not granule aligned");
  if (n == 0 || n > MaxPartialBytes(cfg))
    throw UsageError("partial granule size " + std::to_string(n) +
                     " out of range (1.." +
                     std::to_string(MaxPartialBytes(cfg)) + ")");
  if (!IsValidTag(real_tag, cfg) || IsReservedTag(real_tag, cfg))
    throw UsageError("partial granule real tag must be a non-reserved tag");

  mem.shadow().SetTagRange(granule_addr, cfg.tg, PartialTag(cfg));
  mem.memory().WriteByte(granule_addr + cfg.tg - 2, static_cast<u8>(n));
  mem.memory().WriteByte(granule_addr + cfg.tg - 1, real_tag.value);
}

std::optional<PartialGranuleMeta> ReadPartialMeta(const TaggedMemory& mem,
                                                  uptr addr) {
  const MtConfig& cfg = mem.cfg();
  if (!cfg.precision_ext || mem.shadow().GetTag(addr) != PartialTag(cfg))
    return std::nullopt;
  const uptr base = GranuleBase(addr, cfg);
  return PartialGranuleMeta{mem.memory().ReadByte(base + cfg.tg - 2),
                            Tag{mem.memory().ReadByte(base + cfg.tg - 1)}};
}

bool CheckPartial(const TaggedMemory& mem, uptr granule_addr, u64 offset,
                  u64 width, Tag ptr_tag) {
  auto meta = ReadPartialMeta(mem, granule_addr);
  if (!meta) throw UsageError("granule is not marked partial");
  return ptr_tag == meta->real_tag && offset + width <= meta->n;
}

Tag EffectiveTag(const TaggedMemory& mem, uptr addr) {
  if (auto meta = ReadPartialMeta(mem, addr)) return meta->real_tag;
  return mem.shadow().GetTag(addr);
}

}  // namespace mtsim
