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

#ifndef MTSIM_CONFIG_H_
#define MTSIM_CONFIG_H_

#include <cstdint>
#include <string_view>

namespace mtsim {

using u8 = uint8_t;
using u64 = uint64_t;
using uptr = uint64_t;

enum class StoreMode { kPrecise, kImpreciseStores };

std::string_view StoreModeName(StoreMode mode);

// Tagging granularity, tag width and the runtime mode switches. Every other
// component is parameterized by one of these.
struct MtConfig {
  u64 tg = 16;  // granule size in bytes
  unsigned ts = 8;  // tag width in bits
  bool zero_on_tag = false;
  bool precision_ext = false;
  bool right_align = false;
  double sampling_rate = 1.0;
  StoreMode store_mode = StoreMode::kPrecise;
  u64 quarantine_capacity = 0;  // bytes

  // SPARC ADI: 64-byte granules, 4-bit tags.
  static MtConfig AdiLike();
  // AArch64 HWASAN: 16-byte granules, 8-bit tags.
  static MtConfig HwasanLike();

  // Throws UsageError if any field is out of range or the flags conflict.
  void Validate() const;

  u64 TagCount() const { return u64{1} << ts; }
  u8 MaxTag() const { return static_cast<u8>(TagCount() - 1); }
  // Tag values not in the reserved set.
  unsigned UsableTagCount() const {
    return static_cast<unsigned>(TagCount()) - (precision_ext ? 2 : 1);
  }
};

}  // namespace mtsim

#endif  // MTSIM_CONFIG_H_
