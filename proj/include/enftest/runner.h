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

#ifndef ENFTEST_RUNNER_H_
#define ENFTEST_RUNNER_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enftest/app_sim.h"
#include "enftest/concretizer.h"
#include "enftest/enforcer_runtime.h"
#include "enftest/model.h"

namespace enftest {

class Deployment {
 public:
  static Deployment Baseline();
  static Deployment Enforcer(std::shared_ptr<const EnforcementModel> model,
                             EnforcerCosts costs = {});

  bool is_enforcer() const { return model_ != nullptr; }
  const EnforcementModel* model() const { return model_.get(); }
  const std::optional<FaultSpec>& fault() const { return fault_; }
  const EnforcerCosts& costs() const { return costs_; }

  // Throws std::invalid_argument on a baseline deployment or a negative
  // magnitude. Replaces any fault already attached.
  Deployment WithFault(FaultSpec fault) const;

 private:
  std::shared_ptr<const EnforcementModel> model_;
  std::optional<FaultSpec> fault_;
  EnforcerCosts costs_;
};

Deployment InjectFault(const Deployment& deployment, FaultSpec fault);

struct KpiRecord {
  double launch_ms = 0;
  std::vector<double> action_handler_ms;  // one per UI action
  double peak_memory_kb = 0;
  double energy_units = 0;

  bool operator==(const KpiRecord&) const = default;
};

struct RunConfig {
  std::size_t repetitions = 10;
  ClockMode clock = ClockMode::kVirtual;
  double energy_alpha = 1.0;  // energy units per cpu ms
  std::uint64_t seed = 0;
};

struct ExecutionResult {
  EventList req_trace;  // everything the app emitted
  EventList api_trace;  // what reached the platform
  KpiRecord kpis;
  std::optional<std::string> error;

  bool operator==(const ExecutionResult&) const = default;
};

// Runs one test from a fresh reset. Never throws for app/enforcer mismatches:
// an undefined enforcer transition or a driver failure yields error.
ExecutionResult ExecuteTest(AppDriver& driver, const Deployment& deployment,
                            const ConcreteTest& test, const RunConfig& config);

struct OracleVerdict {
  bool pass = true;
  std::string reason;
  std::optional<std::size_t> index;

  bool operator==(const OracleVerdict&) const = default;
};

// Differential check on alphabet-filtered api traces of the same test.
OracleVerdict CheckOracle(const ConcreteTest& test, const EventList& alphabet,
                          const EventList& baseline_trace,
                          const EventList& enforcer_trace);

struct VerdictRecord {
  std::size_t test = 0;
  std::size_t repetition = 0;
  OracleVerdict verdict;

  bool operator==(const VerdictRecord&) const = default;
};

struct SuiteSamples {
  std::size_t repetitions = 0;
  ClockMode clock = ClockMode::kVirtual;
  std::uint64_t seed = 0;
  double energy_alpha = 1.0;
  EventList alphabet;
  std::optional<FaultSpec> fault;
  // Indexed [test][repetition].
  std::vector<std::vector<ExecutionResult>> baseline;
  std::vector<std::vector<ExecutionResult>> enforcer;
  std::vector<VerdictRecord> verdicts;

  std::size_t test_count() const { return baseline.size(); }
  bool operator==(const SuiteSamples&) const = default;
};

// Runs the whole suite config.repetitions times under each deployment. The two
// variants run concurrently on private drivers. Throws std::invalid_argument
// when tests is empty or repetitions is 0.
SuiteSamples RunSuite(const DriverFactory& driver_factory,
                      const std::vector<ConcreteTest>& tests,
                      const Deployment& baseline, const Deployment& enforcer,
                      const RunConfig& config);

struct PolicyViolation {
  std::string variant;
  std::size_t test = 0;
  std::size_t repetition = 0;
  std::size_t at = 0;
};

// Evaluates every recorded api trace (filtered to the monitor alphabet).
std::vector<PolicyViolation> CheckSamplesAgainstPolicy(
    const SuiteSamples& samples, const PolicyMonitor& monitor);

std::string ExportSamplesJson(const SuiteSamples& samples);
std::string ExportSamplesCsv(const SuiteSamples& samples);
// Throws std::runtime_error on malformed content.
SuiteSamples ImportSamplesJson(std::string_view text);

}  // namespace enftest

#endif  // ENFTEST_RUNNER_H_
