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

#ifndef MTSIM_PRECISION_H_
#define MTSIM_PRECISION_H_

#include <optional>

#include "mtsim/tagged_memory.h"

namespace mtsim {

// Partial granules. With precision_ext on, the maximum tag value is reserved
// to mean "only the first n bytes of this granule are valid". The real tag
// and n live inside the granule itself:
//
//   byte tg-2: n         (valid byte count, 0 < n <= tg-2)
//   byte tg-1: real tag  (the tag a pointer must carry)
//
// Both metadata bytes are always past n, so no application access can reach
// them without failing the check.
struct PartialGranuleMeta {
  u64 n = 0;
  Tag real_tag;
};

// Largest n a partial granule can describe.
inline u64 MaxPartialBytes(const MtConfig& cfg) { return cfg.tg - 2; }

void MarkPartial(TaggedMemory& mem, uptr granule_addr, u64 n, Tag real_tag);

// Metadata of the granule containing `addr`, or nullopt if that granule is
// not marked partial.
std::optional<PartialGranuleMeta> ReadPartialMeta(const TaggedMemory& mem,
                                                  uptr addr);

// True iff an access of `width` bytes at `offset` within a partial granule
// through a pointer tagged `ptr_tag` is allowed. The granule must be
// partial (UsageError otherwise).
bool CheckPartial(const TaggedMemory& mem, uptr granule_addr, u64 offset,
                  u64 width, Tag ptr_tag);

// The tag a pointer must carry to touch the granule: the real tag for a
// partial granule, the shadow tag otherwise.
Tag EffectiveTag(const TaggedMemory& mem, uptr addr);

}  // namespace mtsim

#endif  // MTSIM_PRECISION_H_
