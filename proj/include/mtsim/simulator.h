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

#ifndef MTSIM_SIMULATOR_H_
#define MTSIM_SIMULATOR_H_

#include "mtsim/access.h"
#include "mtsim/allocator.h"
#include "mtsim/stack.h"
#include "mtsim/tagged_memory.h"

namespace mtsim {

// One independent simulated process: tagged memory, heap, stack and the
// checked access path, all driven by a single seed.
class Simulator {
 public:
  Simulator(const MtConfig& cfg, u64 seed)
      : mem_(cfg, seed), heap_(mem_), engine_(mem_, &heap_), stack_(mem_, seed) {}
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  const MtConfig& cfg() const { return mem_.cfg(); }
  TaggedMemory& memory() { return mem_; }
  HeapAllocator& heap() { return heap_; }
  const HeapAllocator& heap() const { return heap_; }
  AccessEngine& engine() { return engine_; }
  StackTagger& stack() { return stack_; }

 private:
  TaggedMemory mem_;
  HeapAllocator heap_;
  AccessEngine engine_;
  StackTagger stack_;
};

}  // namespace mtsim

#endif  // MTSIM_SIMULATOR_H_
