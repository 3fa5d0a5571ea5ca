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

#include "mtsim/shadow.h"

#include <string>

#include "mtsim/errors.h"

namespace mtsim {

void ShadowStore::SetTagRange(uptr addr, u64 len, Tag tag) {
  if (len == 0 || len % cfg_.tg != 0)
    throw UsageError("tag range length " + std::to_string(len) +
                     " is not a positive multiple of the granule size");
  if (addr % cfg_.tg != 0)
    throw UsageError("tag range start is not granule aligned");
  if (addr >= kAddressLimit || len > kAddressLimit - addr)
    throw UsageError("tag range leaves the simulated address space");
  if (!IsValidTag(tag, cfg_))
    throw UsageError("tag does not fit in ts bits");

  const u64 first = GranuleIndex(addr, cfg_);
  const u64 count = len / cfg_.tg;
  for (u64 g = first; g < first + count; ++g) {
    if (tag == kUntagged)
      tags_.erase(g);
    else
      tags_[g] = tag.value;
  }
  granule_writes_ += count;
}

Tag ShadowStore::GetTag(uptr addr) const {
  auto it = tags_.find(GranuleIndex(addr & kAddressMask, cfg_));
  return it == tags_.end() ? kUntagged : Tag{it->second};
}

}  // namespace mtsim
