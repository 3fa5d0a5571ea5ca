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

#include "mtsim/sim_memory.h"

#include <algorithm>

namespace mtsim {

u8 SimMemory::ReadByte(uptr addr) const {
  auto it = pages_.find(addr / kPageSize);
  return it == pages_.end() ? 0 : (*it->second)[addr % kPageSize];
}

void SimMemory::WriteByte(uptr addr, u8 value) {
  PageFor(addr)[addr % kPageSize] = value;
}

void SimMemory::Read(uptr addr, std::span<u8> out) const {
  for (size_t i = 0; i < out.size(); ++i) out[i] = ReadByte(addr + i);
}

void SimMemory::Write(uptr addr, std::span<const u8> bytes) {
  for (size_t i = 0; i < bytes.size(); ++i) WriteByte(addr + i, bytes[i]);
}

void SimMemory::Fill(uptr addr, u64 len, u8 value) {
  while (len > 0) {
    const u64 offset = addr % kPageSize;
    const u64 n = std::min(len, kPageSize - offset);
    Page& page = PageFor(addr);
    std::fill_n(page.begin() + offset, n, value);
    addr += n;
    len -= n;
  }
}

SimMemory::Page& SimMemory::PageFor(uptr addr) {
  auto& slot = pages_[addr / kPageSize];
  if (!slot) slot = std::make_unique<Page>(Page{});
  return *slot;
}

}  // namespace mtsim
