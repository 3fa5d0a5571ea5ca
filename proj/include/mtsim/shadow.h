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

#ifndef MTSIM_SHADOW_H_
#define MTSIM_SHADOW_H_

#include <unordered_map>

#include "mtsim/config.h"
#include "mtsim/tag.h"

namespace mtsim {

// Granule index -> memory tag. Granules that were never tagged (or were set
// back to tag 0) have no entry and read as kUntagged.
class ShadowStore {
 public:
  explicit ShadowStore(const MtConfig& cfg) : cfg_(cfg) {}

  // [addr, addr+len) must be granule aligned with len a positive multiple of
  // tg; otherwise UsageError.
  void SetTagRange(uptr addr, u64 len, Tag tag);
  Tag GetTag(uptr addr) const;

  // Number of granules carrying a nonzero tag.
  size_t TaggedGranules() const { return tags_.size(); }
  // Number of granule tag writes performed so far.
  u64 granule_writes() const { return granule_writes_; }

 private:
  const MtConfig& cfg_;
  std::unordered_map<u64, u8> tags_;
  u64 granule_writes_ = 0;
};

// Tag storage needed for a region: ts bits per started granule.
inline u64 ShadowBitsFor(u64 region_bytes, const MtConfig& cfg) {
  return cfg.ts * ((region_bytes + cfg.tg - 1) / cfg.tg);
}

}  // namespace mtsim

#endif  // MTSIM_SHADOW_H_
