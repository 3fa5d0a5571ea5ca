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

#include "mtsim/scenario.h"

#include <cinttypes>
#include <cstdio>
#include <utility>

#include "mtsim/errors.h"
#include "mtsim/simulator.h"

namespace mtsim {

namespace {

constexpr u8 kScribble = 0x55;

struct NamedKind {
  ScenarioKind kind;
  std::string_view name;
};

constexpr NamedKind kNames[] = {
    {ScenarioKind::kHeapUseAfterFree, "heap-uaf"},
    {ScenarioKind::kLinearOverflow, "linear-overflow"},
    {ScenarioKind::kLinearUnderflow, "linear-underflow"},
    {ScenarioKind::kNonLinearOverflow, "non-linear-overflow"},
    {ScenarioKind::kIntraGranuleOverflow, "intra-granule"},
    {ScenarioKind::kUseAfterReturn, "use-after-return"},
    {ScenarioKind::kUseAfterScope, "use-after-scope"},
    {ScenarioKind::kUninitializedRead, "uninit-read"},
};

std::string Hex(u64 v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "0x%016" PRIx64, v);
  return buf;
}

class Runner {
 public:
  Runner(const Scenario& s, const MtConfig& cfg, bool trace)
      : s_(s), sim_(cfg, s.seed), trace_(trace) {
    if (s.sizes.empty()) throw UsageError("scenario has no sizes");
    if (s.victim >= s.sizes.size())
      throw UsageError("scenario victim index out of range");
    if (s.bug_access != AccessKind::kLoad && s.bug_access != AccessKind::kStore)
      throw UsageError("bug access must be a load or a store");
  }

  ScenarioOutcome Run() {
    switch (s_.kind) {
      case ScenarioKind::kHeapUseAfterFree: HeapUseAfterFree(); break;
      case ScenarioKind::kLinearOverflow:
      case ScenarioKind::kLinearUnderflow:
      case ScenarioKind::kIntraGranuleOverflow: Spatial(); break;
      case ScenarioKind::kNonLinearOverflow: NonLinearOverflow(); break;
      case ScenarioKind::kUseAfterReturn: UseAfterReturn(); break;
      case ScenarioKind::kUseAfterScope: UseAfterScope(); break;
      case ScenarioKind::kUninitializedRead: UninitializedRead(); break;
    }
    return std::move(out_);
  }

 private:
  const MtConfig& cfg() const { return sim_.cfg(); }

  template <typename F>
  void Log(F&& make_line) {
    if (trace_) out_.log.push_back(make_line());
  }

  TaggedPtr Alloc(u64 size) {
    TaggedPtr p = sim_.heap().Malloc(size, s_.policy);
    Log([&] { return "malloc(" + std::to_string(size) + ") = " + Hex(p.word); });
    return p;
  }

  void Free(TaggedPtr p) {
    Log([&] { return "free(" + Hex(p.word) + ")"; });
    if (auto fault = sim_.heap().Free(p))
      throw HarnessError("setup free faulted: " + RenderPlain(*fault));
  }

  void SetupStore(TaggedPtr p, u8 value) {
    if (auto fault = sim_.engine().StoreU8(p, value))
      throw HarnessError("setup store faulted: " + RenderPlain(*fault));
  }

  const Chunk& ChunkOf(TaggedPtr p) const {
    return *sim_.heap().FindChunk(AddressOf(p));
  }

  int64_t OffsetOr(int64_t fallback) const {
    return s_.offset.value_or(fallback);
  }

  void RequireOffset(int64_t offset, int64_t lo, int64_t hi) const {
    if (offset < lo || offset >= hi)
      throw UsageError("scenario offset " + std::to_string(offset) +
                       " outside [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + ")");
  }

  // The injected bug. Deferred store faults are drained right after it so
  // they are attributed to this access and nothing else.
  void Bug(TaggedPtr p) {
    if (!sim_.engine().Sync().empty())
      throw HarnessError("deferred fault from a setup access");
    if (s_.bug_access == AccessKind::kLoad) {
      LoadResult r = sim_.engine().Load(p, 1);
      if (auto* fault = std::get_if<FaultReport>(&r)) {
        Detected(*fault);
      } else {
        out_.observed = std::get<LoadValue>(r).bytes[0];
        Log([&] {
          return "load " + Hex(p.word) + " = " + std::to_string(*out_.observed);
        });
      }
      return;
    }
    if (auto fault = sim_.engine().StoreU8(p, 0)) {
      Detected(*fault);
      return;
    }
    std::vector<FaultReport> deferred = sim_.engine().Sync();
    if (!deferred.empty()) {
      Detected(deferred.front());
      return;
    }
    Log([&] { return "store " + Hex(p.word) + " ok"; });
  }

  void Detected(const FaultReport& fault) {
    out_.detected = true;
    out_.report = fault;
    Log([&] { return RenderPlain(fault); });
  }

  std::vector<TaggedPtr> AllocAll() {
    std::vector<TaggedPtr> ptrs;
    ptrs.reserve(s_.sizes.size());
    for (u64 size : s_.sizes) ptrs.push_back(Alloc(size));
    return ptrs;
  }

  void HeapUseAfterFree() {
    const std::vector<TaggedPtr> ptrs = AllocAll();
    const TaggedPtr stale = ptrs[s_.victim];
    const int64_t size = static_cast<int64_t>(ChunkOf(stale).requested);
    const int64_t offset = OffsetOr(0);
    RequireOffset(offset, 0, size);

    Free(stale);
    if (s_.flush_before_reuse) {
      const size_t n = sim_.heap().QuarantineFlush();
      Log([&] { return "quarantine flush released " + std::to_string(n); });
    }
    for (unsigned i = 0; i < s_.reuse_depth; ++i) Alloc(s_.sizes[s_.victim]);
    Bug(Advance(stale, offset, cfg()));
  }

  void Spatial() {
    const u64 fence = cfg().tg;
    Alloc(fence);
    const std::vector<TaggedPtr> ptrs = AllocAll();
    Alloc(fence);

    const TaggedPtr p = ptrs[s_.victim];
    const Chunk& c = ChunkOf(p);
    const int64_t requested = static_cast<int64_t>(c.requested);
    const int64_t to_end = static_cast<int64_t>(c.end() - c.user_begin);
    int64_t offset = 0;
    switch (s_.kind) {
      case ScenarioKind::kLinearOverflow:
        offset = OffsetOr(to_end);
        RequireOffset(offset, requested, INT64_MAX);
        break;
      case ScenarioKind::kLinearUnderflow:
        offset = OffsetOr(-1);
        RequireOffset(offset, INT64_MIN, 0);
        break;
      default: {
        const int64_t slack_end =
            static_cast<int64_t>(RoundUpTo(c.requested, cfg().tg));
        if (requested == slack_end)
          throw UsageError("intra-granule scenario needs a size that is not "
                           "a granule multiple");
        offset = OffsetOr(requested);
        RequireOffset(offset, requested, slack_end);
      }
    }
    Bug(Advance(p, offset, cfg()));
  }

  void NonLinearOverflow() {
    if (s_.victim == 0)
      throw UsageError("non-linear overflow target must not be the source");
    const std::vector<TaggedPtr> ptrs = AllocAll();
    const TaggedPtr source = ptrs[0];
    const Chunk& target = ChunkOf(ptrs[s_.victim]);
    const int64_t offset = OffsetOr(0);
    RequireOffset(offset, 0, static_cast<int64_t>(target.requested));
    const int64_t delta =
        static_cast<int64_t>(target.user_begin - AddressOf(source)) + offset;
    Bug(Advance(source, delta, cfg()));
  }

  int64_t LocalOffset() const {
    const int64_t size =
        static_cast<int64_t>(std::max<u64>(s_.sizes[s_.victim], 1));
    const int64_t offset = OffsetOr(0);
    RequireOffset(offset, 0, size);
    return offset;
  }

  void UseAfterReturn() {
    const int64_t offset = LocalOffset();
    StackTagger& stack = sim_.stack();
    Frame f = stack.EnterFrame(s_.sizes);
    const TaggedPtr stale = f.LocalPtr(s_.victim, cfg());
    Log([&] { return "enter frame, local = " + Hex(stale.word); });
    stack.ExitFrame(f);
    Log([] { return std::string("exit frame"); });

    std::optional<Frame> again;
    for (unsigned i = 0; i < s_.reuse_depth; ++i) {
      if (again) stack.ExitFrame(*again);
      again = stack.EnterFrame(s_.sizes);
      Log([&] {
        return "re-enter frame, local = " +
               Hex(again->LocalPtr(s_.victim, cfg()).word);
      });
    }
    Bug(Advance(stale, offset, cfg()));
    if (again) stack.ExitFrame(*again);
  }

  void UseAfterScope() {
    const int64_t offset = LocalOffset();
    StackTagger& stack = sim_.stack();
    Frame f = stack.EnterFrame(s_.sizes);
    const TaggedPtr p = f.LocalPtr(s_.victim, cfg());
    Log([&] { return "enter frame, local = " + Hex(p.word); });
    stack.EndScope(f, s_.victim);
    Log([] { return std::string("end scope"); });
    Bug(Advance(p, offset, cfg()));
    stack.ExitFrame(f);
  }

  void UninitializedRead() {
    const u64 size = s_.sizes[s_.victim];
    const int64_t offset = OffsetOr(0);
    RequireOffset(offset, 0, static_cast<int64_t>(std::max<u64>(size, 1)));
    if (s_.bug_access != AccessKind::kLoad)
      throw UsageError("uninit-read needs a load");

    const TaggedPtr first = Alloc(size);
    for (u64 i = 0; i < size; ++i)
      SetupStore(Advance(first, static_cast<int64_t>(i), cfg()), kScribble);
    Free(first);
    sim_.heap().QuarantineFlush();
    const TaggedPtr again = Alloc(size);

    const LoadResult r =
        sim_.engine().Load(Advance(again, offset, cfg()), 1);
    if (IsFault(r))
      throw HarnessError("uninit-read faulted: " +
                         RenderPlain(std::get<FaultReport>(r)));
    out_.observed = std::get<LoadValue>(r).bytes[0];
    out_.detected = *out_.observed == 0;
    Log([&] { return "read = " + std::to_string(*out_.observed); });
  }

  const Scenario& s_;
  Simulator sim_;
  bool trace_;
  ScenarioOutcome out_;
};

}  // namespace

std::string_view ScenarioName(ScenarioKind kind) {
  for (const auto& n : kNames)
    if (n.kind == kind) return n.name;
  return "?";
}

std::optional<ScenarioKind> ParseScenarioName(std::string_view name) {
  for (const auto& n : kNames)
    if (n.name == name) return n.kind;
  return std::nullopt;
}

Scenario DefaultScenario(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::kHeapUseAfterFree: s.sizes = {48}; break;
    case ScenarioKind::kLinearOverflow:
    case ScenarioKind::kLinearUnderflow: s.sizes = {10}; break;
    case ScenarioKind::kIntraGranuleOverflow: s.sizes = {10}; break;
    case ScenarioKind::kNonLinearOverflow:
      s.sizes = {32, 64, 32};
      s.victim = 2;
      break;
    case ScenarioKind::kUseAfterReturn:
    case ScenarioKind::kUseAfterScope: s.sizes = {16, 32}; break;
    case ScenarioKind::kUninitializedRead: s.sizes = {64}; break;
  }
  return s;
}

ScenarioOutcome RunScenario(const Scenario& s, const MtConfig& cfg,
                            bool trace) {
  return Runner(s, cfg, trace).Run();
}

}  // namespace mtsim
