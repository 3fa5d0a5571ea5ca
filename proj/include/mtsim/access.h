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

#ifndef MTSIM_ACCESS_H_
#define MTSIM_ACCESS_H_

#include <array>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mtsim/allocator.h"
#include "mtsim/fault.h"
#include "mtsim/tagged_memory.h"

namespace mtsim {

struct LoadValue {
  std::array<u8, 8> bytes{};
  unsigned width = 0;

  // Little-endian.
  u64 AsU64() const {
    u64 v = 0;
    for (unsigned i = 0; i < width; ++i) v |= u64{bytes[i]} << (8 * i);
    return v;
  }
};

using LoadResult = std::variant<LoadValue, FaultReport>;

inline bool IsFault(const LoadResult& r) {
  return std::holds_alternative<FaultReport>(r);
}

// What a syscall would return instead of faulting.
struct RangeError {
  int code = 0;  // EFAULT
  uptr granule_base = 0;  // first granule that failed the check
};

// Checked loads and stores. Every granule an access touches must accept the
// pointer tag: equal tags, an untagged granule, or a partial granule whose
// valid prefix covers the bytes touched.
//
// Loads always fault precisely. Stores fault precisely in kPrecise mode; in
// kImpreciseStores mode a mismatching store is dropped and its report is
// queued until Sync().
class AccessEngine {
 public:
  // `heap` supplies chunk provenance for reports and may be null.
  AccessEngine(TaggedMemory& mem, const HeapAllocator* heap)
      : mem_(mem), heap_(heap) {}

  // width must be 1, 2, 4 or 8.
  LoadResult Load(TaggedPtr p, unsigned width);
  std::optional<FaultReport> Store(TaggedPtr p, std::span<const u8> bytes);
  std::optional<FaultReport> StoreU8(TaggedPtr p, u8 value) {
    return Store(p, std::span<const u8>(&value, 1));
  }

  // Drains deferred store faults in program order.
  std::vector<FaultReport> Sync();
  size_t pending() const { return deferred_.size(); }

  // Checks every granule overlapped by [addr, addr+len) without touching
  // memory or raising a fault.
  std::optional<RangeError> CheckUserRange(TaggedPtr p, u64 len) const;

 private:
  std::optional<FaultReport> Check(TaggedPtr p, u64 len,
                                   AccessKind access) const;

  TaggedMemory& mem_;
  const HeapAllocator* heap_;
  std::vector<FaultReport> deferred_;
};

}  // namespace mtsim

#endif  // MTSIM_ACCESS_H_
