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

#include "enftest/enforcer_runtime.h"

#include <chrono>
#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>
#include <thread>

namespace enftest {

namespace {

constexpr std::pair<FaultKind, std::string_view> kFaultNames[] = {
    {FaultKind::kResponsivenessDelay, "responsivenessDelay"},
    {FaultKind::kStartupDelay, "startupDelay"},
    {FaultKind::kCpuHog, "cpuHog"},
    {FaultKind::kMemoryLeak, "memoryLeak"},
};

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void SleepMs(double ms) {
  std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(ms));
}

}  // namespace

std::string_view FaultKindName(FaultKind kind) {
  for (const auto& [k, name] : kFaultNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

FaultSpec ParseFault(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("fault must be written kind=value");
  }
  const auto kind = text.substr(0, eq);
  const std::string value(text.substr(eq + 1));
  for (const auto& [k, name] : kFaultNames) {
    if (name != kind) continue;
    std::size_t used = 0;
    double magnitude = 0;
    try {
      magnitude = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || !std::isfinite(magnitude) ||
        magnitude < 0) {
      throw std::invalid_argument("fault magnitude must be a number >= 0");
    }
    return {k, magnitude};
  }
  throw std::invalid_argument("unknown fault kind '" + std::string(kind) + "'");
}

std::string FormatFault(const FaultSpec& fault) {
  std::string value = std::to_string(fault.magnitude);
  value.erase(value.find_last_not_of('0') + 1);
  if (!value.empty() && value.back() == '.') value.pop_back();
  return std::string(FaultKindName(fault.kind)) + "=" + value;
}

EnforcerRuntime::EnforcerRuntime(const EnforcementModel& model,
                                 EnforcerCosts costs,
                                 std::optional<FaultSpec> fault,
                                 ClockMode clock, std::uint64_t seed)
    : model_(model),
      costs_(costs),
      fault_(fault),
      clock_(clock),
      seed_(seed),
      state_(model.initial()) {}

EnforcerRuntime::~EnforcerRuntime() = default;

std::size_t EnforcerRuntime::leaked_bytes() const { return leaked_bytes_; }

double EnforcerRuntime::Initialize() {
  state_ = model_.initial();
  const double startup =
      fault_ && fault_->kind == FaultKind::kStartupDelay ? fault_->magnitude : 0;
  if (clock_ == ClockMode::kVirtual) return costs_.init_ms + startup;
  const auto start = Clock::now();
  SleepMs(costs_.init_ms + startup);
  return MillisSince(start);
}

std::optional<Interception> EnforcerRuntime::Intercept(const EventName& event) {
  const auto start = Clock::now();
  const auto t = model_.Step(state_, event);
  if (!t) return std::nullopt;
  state_ = t->next;

  Interception out;
  out.outputs = t->outputs;
  out.cpu_ms = costs_.per_event_cpu_ms;
  double delay_ms = 0;
  if (fault_) {
    switch (fault_->kind) {
      case FaultKind::kResponsivenessDelay:
        delay_ms = fault_->magnitude;
        break;
      case FaultKind::kCpuHog:
        out.cpu_ms += fault_->magnitude;
        break;
      case FaultKind::kMemoryLeak:
        out.alloc_kb = fault_->magnitude;
        break;
      case FaultKind::kStartupDelay:
        break;
    }
  }

  if (clock_ == ClockMode::kVirtual) {
    out.handler_ms = out.cpu_ms + delay_ms;
    return out;
  }

  if (delay_ms > 0) SleepMs(delay_ms);
  if (out.cpu_ms > 0) {
    std::mt19937_64 rng(seed_ ^ leaked_bytes_);
    const auto spin_start = Clock::now();
    std::uint64_t acc = 0;
    while (MillisSince(spin_start) < out.cpu_ms) acc += rng();
    sink_ = sink_ + acc;
  }
  if (out.alloc_kb > 0) {
    const auto bytes = static_cast<std::size_t>(out.alloc_kb * 1024);
    auto block = std::make_unique<unsigned char[]>(bytes);
    std::memset(block.get(), 0xA5, bytes);
    leaked_.push_back(std::move(block));
    leaked_bytes_ += bytes;
  }
  out.handler_ms = MillisSince(start);
  return out;
}

}  // namespace enftest
