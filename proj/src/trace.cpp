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

#include "mtsim/trace.h"

#include <algorithm>
#include <charconv>
#include <string>
#include <string_view>
#include <unordered_map>

#include "mtsim/errors.h"
#include "mtsim/tag.h"

namespace mtsim {

namespace {

u64 ParseDecimal(std::string_view field, size_t line) {
  u64 value = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end)
    throw InputError("bad decimal '" + std::string(field) + "'", line);
  return value;
}

}  // namespace

std::vector<TraceEvent> ParseTrace(std::istream& in) {
  std::vector<TraceEvent> events;
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty() || text[0] == '#') continue;

    std::vector<std::string_view> fields;
    std::string_view rest = text;
    for (;;) {
      const size_t sp = rest.find(' ');
      fields.push_back(rest.substr(0, sp));
      if (sp == std::string_view::npos) break;
      rest.remove_prefix(sp + 1);
    }

    TraceEvent ev;
    ev.line = line;
    if (fields[0] == "a" && fields.size() == 3) {
      ev.op = TraceEvent::Op::kAlloc;
      ev.id = ParseDecimal(fields[1], line);
      ev.size = ParseDecimal(fields[2], line);
    } else if (fields[0] == "f" && fields.size() == 2) {
      ev.op = TraceEvent::Op::kFree;
      ev.id = ParseDecimal(fields[1], line);
    } else {
      throw InputError("expected 'a <id> <size>' or 'f <id>'", line);
    }
    events.push_back(ev);
  }
  return events;
}

OverheadReport AnalyzeTrace(std::span<const TraceEvent> events,
                            std::span<const u64> alignments, unsigned ts) {
  std::vector<u64> order = {kBaseAlignment};
  for (u64 a : alignments) {
    if (a < kBaseAlignment || (a & (a - 1)) != 0)
      throw UsageError("alignment " + std::to_string(a) +
                       " is not a power of two >= 8");
    if (std::find(order.begin(), order.end(), a) == order.end())
      order.push_back(a);
  }

  // Validate once; the replay below can then trust the ids.
  std::unordered_map<u64, u64> live_sizes;
  for (const TraceEvent& ev : events) {
    if (ev.op == TraceEvent::Op::kAlloc) {
      if (!live_sizes.emplace(ev.id, ev.size).second)
        throw InputError("id " + std::to_string(ev.id) + " is already live",
                         ev.line);
    } else if (live_sizes.erase(ev.id) == 0) {
      throw InputError("free of unknown id " + std::to_string(ev.id), ev.line);
    }
  }

  OverheadReport report;
  report.ts = ts;
  std::vector<u64> peaks(order.size(), 0);
  std::vector<u64> live(order.size(), 0);
  live_sizes.clear();
  for (const TraceEvent& ev : events) {
    u64 size;
    if (ev.op == TraceEvent::Op::kAlloc) {
      size = ev.size;
      live_sizes.emplace(ev.id, size);
    } else {
      auto it = live_sizes.find(ev.id);
      size = it->second;
      live_sizes.erase(it);
    }
    for (size_t i = 0; i < order.size(); ++i) {
      const u64 charged = RoundUpTo(std::max<u64>(size, 1), order[i]);
      if (ev.op == TraceEvent::Op::kAlloc) {
        live[i] += charged;
        peaks[i] = std::max(peaks[i], live[i]);
      } else {
        live[i] -= charged;
      }
    }
  }

  const double base = static_cast<double>(peaks[0]);
  for (size_t i = 0; i < order.size(); ++i) {
    OverheadRow row;
    row.alignment = order[i];
    row.peak_bytes = peaks[i];
    row.overhead_pct =
        base > 0 ? 100.0 * (static_cast<double>(peaks[i]) - base) / base : 0;
    row.tag_storage_bytes = static_cast<double>(peaks[i]) * ts /
                            (8.0 * static_cast<double>(order[i]));
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mtsim
