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

#include "mtsim/config.h"

#include <string>

#include "mtsim/errors.h"

namespace mtsim {

std::string_view StoreModeName(StoreMode mode) {
  return mode == StoreMode::kPrecise ? "precise" : "imprecise";
}

MtConfig MtConfig::AdiLike() {
  MtConfig cfg;
  cfg.tg = 64;
  cfg.ts = 4;
  return cfg;
}

MtConfig MtConfig::HwasanLike() {
  MtConfig cfg;
  cfg.tg = 16;
  cfg.ts = 8;
  return cfg;
}

void MtConfig::Validate() const {
  if (tg != 16 && tg != 32 && tg != 64)
    throw UsageError("tg must be 16, 32 or 64, got " + std::to_string(tg));
  if (ts != 4 && ts != 8)
    throw UsageError("ts must be 4 or 8, got " + std::to_string(ts));
  if (!(sampling_rate >= 0.0 && sampling_rate <= 1.0))
    throw UsageError("sampling_rate must be in [0, 1]");
  if (precision_ext && right_align)
    throw UsageError("precision_ext and right_align are mutually exclusive");
}

}  // namespace mtsim
