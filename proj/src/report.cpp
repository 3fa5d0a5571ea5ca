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

#include "mtsim/report.h"

#include <cstdio>

namespace mtsim {

namespace {

std::string Format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

}  // namespace

nlohmann::ordered_json ConfigToJson(const MtConfig& cfg) {
  nlohmann::ordered_json j;
  j["tg"] = cfg.tg;
  j["ts"] = cfg.ts;
  j["zero_on_tag"] = cfg.zero_on_tag;
  j["precision_ext"] = cfg.precision_ext;
  j["right_align"] = cfg.right_align;
  j["sampling_rate"] = cfg.sampling_rate;
  j["store_mode"] = StoreModeName(cfg.store_mode);
  j["quarantine"] = cfg.quarantine_capacity;
  return j;
}

nlohmann::ordered_json ToJson(const DetectionReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = ScenarioName(r.kind);
  j["trials"] = r.trials;
  j["detections"] = r.detections;
  j["rate"] = r.rate;
  j["theoretical"] = r.theoretical ? nlohmann::ordered_json(*r.theoretical)
                                   : nlohmann::ordered_json();
  j["model"] =
      r.model ? nlohmann::ordered_json(*r.model) : nlohmann::ordered_json();
  nlohmann::ordered_json cfg = ConfigToJson(r.config);
  cfg["policy"] = TagPolicyName(r.policy.kind);
  if (r.policy.kind == TagPolicyKind::kSampled)
    cfg["policy_rate"] = r.policy.rate;
  if (r.kind == ScenarioKind::kHeapUseAfterFree)
    cfg["force_reuse"] = r.force_reuse;
  j["config"] = std::move(cfg);
  return j;
}

nlohmann::ordered_json ToJson(const OverheadReport& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const OverheadRow& row : r.rows) {
    nlohmann::ordered_json j;
    j["alignment"] = row.alignment;
    j["peak_bytes"] = row.peak_bytes;
    j["overhead_pct"] = row.overhead_pct;
    j["tag_storage_bytes"] = row.tag_storage_bytes;
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["ts"] = r.ts;
  out["rows"] = std::move(rows);
  return out;
}

std::string RenderPlain(std::span<const DetectionReport> reports) {
  std::string out = Format("%-20s %-18s %4s %4s %9s %9s %9s %9s\n", "kind",
                           "policy", "tg", "ts", "trials", "rate",
                           "theory", "model");
  for (const DetectionReport& r : reports) {
    const std::string kind(ScenarioName(r.kind));
    const std::string policy(TagPolicyName(r.policy.kind));
    out += Format("%-20s %-18s %4llu %4u %9llu %9.6f ", kind.c_str(),
                  policy.c_str(), static_cast<unsigned long long>(r.config.tg),
                  r.config.ts, static_cast<unsigned long long>(r.trials),
                  r.rate);
    out += r.theoretical ? Format("%9.6f ", *r.theoretical)
                         : Format("%9s ", "-");
    out += r.model ? Format("%9.6f\n", *r.model) : Format("%9s\n", "-");
  }
  return out;
}

std::string RenderPlain(const OverheadReport& r) {
  std::string out = Format("%9s %12s %10s %14s\n", "alignment", "peak_bytes",
                           "overhead%", "tag_storage");
  for (const OverheadRow& row : r.rows) {
    out += Format("%9llu %12llu %9.2f%% %14.3f\n",
                  static_cast<unsigned long long>(row.alignment),
                  static_cast<unsigned long long>(row.peak_bytes),
                  row.overhead_pct, row.tag_storage_bytes);
  }
  return out;
}

}  // namespace mtsim
