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

#ifndef MTSIM_ERRORS_H_
#define MTSIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mtsim {

// Contract violation by the caller: bad alignment, bad config, LIFO
// violation, malformed scenario. Never used for tag faults, which are
// returned as FaultReport values.
class UsageError : public std::logic_error {
 public:
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// The simulated heap or stack ran out of room.
class AllocationFailure : public std::runtime_error {
 public:
  explicit AllocationFailure(const std::string& what)
      : std::runtime_error(what) {}
};

// Malformed input file (trace parser).
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// A scenario faulted somewhere other than its injected bug access.
class HarnessError : public std::logic_error {
 public:
  explicit HarnessError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mtsim

#endif  // MTSIM_ERRORS_H_
