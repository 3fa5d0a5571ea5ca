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

#include "mtsim/tagged_memory.h"

#include <algorithm>

#include "mtsim/errors.h"

namespace mtsim {

TaggedMemory::TaggedMemory(const MtConfig& cfg, u64 seed)
    : cfg_(cfg), shadow_(cfg_), rng_(seed) {
  cfg_.Validate();
}

Tag TaggedMemory::RandomTag(std::span<const Tag> exclude) {
  const unsigned usable = cfg_.UsableTagCount();
  unsigned excluded = 0;
  for (size_t i = 0; i < exclude.size(); ++i) {
    const Tag t = exclude[i];
    if (!IsValidTag(t, cfg_) || IsReservedTag(t, cfg_)) continue;
    if (std::find(exclude.begin(), exclude.begin() + i, t) ==
        exclude.begin() + i)
      ++excluded;
  }
  if (excluded == usable) throw UsageError("no tag left to choose from");

  // Rejection keeps the draw uniform over the allowed set.
  std::uniform_int_distribution<unsigned> pick(0, usable - 1);
  for (;;) {
    Tag tag = UsableTagAt(pick(rng_), cfg_);
    if (std::find(exclude.begin(), exclude.end(), tag) == exclude.end())
      return tag;
  }
}

bool TaggedMemory::Chance(double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return std::bernoulli_distribution(p)(rng_);
}

}  // namespace mtsim
