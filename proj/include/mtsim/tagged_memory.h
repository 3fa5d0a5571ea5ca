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

#ifndef MTSIM_TAGGED_MEMORY_H_
#define MTSIM_TAGGED_MEMORY_H_

#include <initializer_list>
#include <random>
#include <span>

#include "mtsim/config.h"
#include "mtsim/shadow.h"
#include "mtsim/sim_memory.h"
#include "mtsim/tag.h"

namespace mtsim {

// State shared by the allocator, the stack tagger and the access engine of
// one simulator instance: config, shadow tags, data bytes and the tag RNG.
class TaggedMemory {
 public:
  TaggedMemory(const MtConfig& cfg, u64 seed);
  TaggedMemory(const TaggedMemory&) = delete;
  TaggedMemory& operator=(const TaggedMemory&) = delete;

  const MtConfig& cfg() const { return cfg_; }
  ShadowStore& shadow() { return shadow_; }
  const ShadowStore& shadow() const { return shadow_; }
  SimMemory& memory() { return memory_; }
  const SimMemory& memory() const { return memory_; }
  std::mt19937_64& rng() { return rng_; }

  // Uniform over the non-reserved tags not listed in `exclude` (entries that
  // are reserved are ignored). UsageError if nothing is left to choose.
  Tag RandomTag(std::span<const Tag> exclude = {});
  Tag RandomTag(std::initializer_list<Tag> exclude) {
    return RandomTag(std::span<const Tag>(exclude.begin(), exclude.size()));
  }
  // Bernoulli draw from the same stream.
  bool Chance(double p);

 private:
  const MtConfig cfg_;
  ShadowStore shadow_;
  SimMemory memory_;
  std::mt19937_64 rng_;
};

}  // namespace mtsim

#endif  // MTSIM_TAGGED_MEMORY_H_
