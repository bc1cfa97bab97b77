// Copyright 2026 The enftest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENFTEST_ENFORCER_RUNTIME_H_
#define ENFTEST_ENFORCER_RUNTIME_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enftest/model.h"

namespace enftest {

enum class ClockMode { kVirtual, kWall };

enum class FaultKind {
  kResponsivenessDelay,  // ms of delay per intercepted event
  kStartupDelay,         // ms added to initialization
  kCpuHog,               // ms of busy work per intercepted event
  kMemoryLeak,           // kb allocated and never freed per intercepted event
};

struct FaultSpec {
  FaultKind kind = FaultKind::kResponsivenessDelay;
  double magnitude = 0;

  bool operator==(const FaultSpec&) const = default;
};

std::string_view FaultKindName(FaultKind kind);
// Parses "kind=value", e.g. "memoryLeak=100". Throws std::invalid_argument.
FaultSpec ParseFault(std::string_view text);
std::string FormatFault(const FaultSpec& fault);

// Declared costs of the enforcer runtime itself. bookkeeping_kb is allocated
// once at initialization and held for the whole run.
struct EnforcerCosts {
  double init_ms = 0;
  double bookkeeping_kb = 1000;
  double per_event_cpu_ms = 0;
};

// What the enforcer did while handling one intercepted event.
struct Interception {
  EventList outputs;
  double handler_ms = 0;  // time added to the enclosing UI handler
  double cpu_ms = 0;      // busy CPU time (feeds the energy model)
  double alloc_kb = 0;    // never released
};

// Software enforcer under test: drives the enforcement model over intercepted
// req events and applies the injected fault, if any. In virtual clock mode the
// fault magnitudes are charged directly; in wall clock mode delays sleep, hogs
// spin, leaks hold real buffers, and durations are measured.
class EnforcerRuntime {
 public:
  EnforcerRuntime(const EnforcementModel& model, EnforcerCosts costs,
                  std::optional<FaultSpec> fault, ClockMode clock,
                  std::uint64_t seed = 0);
  ~EnforcerRuntime();
  EnforcerRuntime(const EnforcerRuntime&) = delete;
  EnforcerRuntime& operator=(const EnforcerRuntime&) = delete;

  // Resets to the model's initial state; returns initialization time in ms.
  double Initialize();
  // Returns nullopt when the model has no transition for event in the current
  // state. event must be in the model alphabet.
  std::optional<Interception> Intercept(const EventName& event);

  const StateId& state() const { return state_; }
  std::size_t leaked_bytes() const;

 private:
  const EnforcementModel& model_;
  EnforcerCosts costs_;
  std::optional<FaultSpec> fault_;
  ClockMode clock_;
  std::uint64_t seed_;
  StateId state_;
  std::vector<std::unique_ptr<unsigned char[]>> leaked_;
  std::size_t leaked_bytes_ = 0;
  volatile std::uint64_t sink_ = 0;
};

}  // namespace enftest

#endif  // ENFTEST_ENFORCER_RUNTIME_H_
