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

#ifndef MTSIM_TAG_H_
#define MTSIM_TAG_H_

#include <compare>
#include <cstdint>
#include <utility>

#include "mtsim/config.h"

namespace mtsim {

// Simulated address space is 2^56 bytes; the top byte of a pointer word is
// never part of the address.
inline constexpr unsigned kAddressBits = 56;
inline constexpr uptr kAddressLimit = uptr{1} << kAddressBits;
inline constexpr uptr kAddressMask = kAddressLimit - 1;

struct Tag {
  u8 value = 0;

  constexpr Tag() = default;
  constexpr explicit Tag(u8 v) : value(v) {}
  friend constexpr auto operator<=>(Tag, Tag) = default;
};

inline constexpr Tag kUntagged{0};

// Reserved for partial granules when the precision extension is on.
inline Tag PartialTag(const MtConfig& cfg) { return Tag{cfg.MaxTag()}; }

bool IsValidTag(Tag tag, const MtConfig& cfg);
bool IsReservedTag(Tag tag, const MtConfig& cfg);

// Maps an index in [0, UsableTagCount()) onto the non-reserved tags in
// increasing order. Reserved tags are 0 and, with precision_ext, the max.
Tag UsableTagAt(unsigned index, const MtConfig& cfg);
unsigned UsableIndexOf(Tag tag, const MtConfig& cfg);

// A 64-bit pointer word: tag in bits [64-ts, 64), address in bits [0, 56),
// everything in between zero.
struct TaggedPtr {
  u64 word = 0;
  friend constexpr bool operator==(TaggedPtr, TaggedPtr) = default;
};

TaggedPtr Pack(uptr addr, Tag tag, const MtConfig& cfg);
std::pair<uptr, Tag> Unpack(TaggedPtr p, const MtConfig& cfg);

inline uptr AddressOf(TaggedPtr p) { return p.word & kAddressMask; }
inline Tag TagOf(TaggedPtr p, const MtConfig& cfg) {
  return Tag{static_cast<u8>(p.word >> (64 - cfg.ts))};
}

// Pointer arithmetic that keeps the tag, as top-byte-ignore hardware does.
// Throws UsageError if the address leaves the simulated space.
TaggedPtr Advance(TaggedPtr p, int64_t delta, const MtConfig& cfg);

inline u64 GranuleIndex(uptr addr, const MtConfig& cfg) {
  return addr / cfg.tg;
}
inline uptr GranuleBase(uptr addr, const MtConfig& cfg) {
  return addr - addr % cfg.tg;
}
inline u64 RoundUpTo(u64 size, u64 boundary) {
  return (size + boundary - 1) / boundary * boundary;
}

// Memory tag 0 matches any pointer. Partial granules are resolved by the
// precision extension, not here.
inline bool TagsMatch(Tag ptr_tag, Tag mem_tag) {
  return mem_tag == kUntagged || ptr_tag == mem_tag;
}

}  // namespace mtsim

#endif  // MTSIM_TAG_H_
