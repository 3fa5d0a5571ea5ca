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

#ifndef MTSIM_SIM_MEMORY_H_
#define MTSIM_SIM_MEMORY_H_

#include <array>
#include <memory>
#include <span>
#include <unordered_map>

#include "mtsim/config.h"

namespace mtsim {

// Byte-addressable backing store for the simulated address space. Pages are
// materialized on first write; unwritten bytes read as zero. No tag checks
// happen here.
class SimMemory {
 public:
  static constexpr u64 kPageSize = 4096;

  u8 ReadByte(uptr addr) const;
  void WriteByte(uptr addr, u8 value);
  void Read(uptr addr, std::span<u8> out) const;
  void Write(uptr addr, std::span<const u8> bytes);
  void Fill(uptr addr, u64 len, u8 value);

  size_t resident_pages() const { return pages_.size(); }

 private:
  using Page = std::array<u8, kPageSize>;
  Page& PageFor(uptr addr);

  std::unordered_map<u64, std::unique_ptr<Page>> pages_;
};

}  // namespace mtsim

#endif  // MTSIM_SIM_MEMORY_H_
