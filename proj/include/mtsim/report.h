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

#ifndef MTSIM_REPORT_H_
#define MTSIM_REPORT_H_

#include <span>
#include <string>

#include "json.hpp"
#include "mtsim/detection.h"
#include "mtsim/trace.h"

namespace mtsim {

nlohmann::ordered_json ConfigToJson(const MtConfig& cfg);

// Keys: kind, trials, detections, rate, theoretical, model, config.
nlohmann::ordered_json ToJson(const DetectionReport& r);
// Keys per row: alignment, peak_bytes, overhead_pct, tag_storage_bytes.
nlohmann::ordered_json ToJson(const OverheadReport& r);

std::string RenderPlain(std::span<const DetectionReport> reports);
std::string RenderPlain(const OverheadReport& r);

}  // namespace mtsim

#endif  // MTSIM_REPORT_H_
