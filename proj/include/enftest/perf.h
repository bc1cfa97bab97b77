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

#ifndef ENFTEST_PERF_H_
#define ENFTEST_PERF_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "enftest/runner.h"

namespace enftest {

struct Thresholds {
  double responsiveness_ms = 200;
  double launch_ms = 5000;
  double memory_overhead_pct = 5.0;
  double energy_overhead_pct = 5.0;

  // Throws std::invalid_argument unless every threshold is positive.
  void Validate() const;
};

// Even counts average the two middle order statistics. Throws
// std::invalid_argument on an empty input.
double Median(std::vector<double> values);

struct VariantAggregates {
  double launch_median = 0;       // first test of each repetition
  double max_handler_median = 0;  // max over (test, action) of the median
  double peak_memory_median = 0;  // of per-repetition suite maxima
  double energy_median = 0;       // of per-repetition suite totals

  // Per-repetition suite values the medians were taken over.
  std::vector<double> launch_samples;
  std::vector<double> peak_memory_samples;
  std::vector<double> energy_samples;
  // Per-test medians, for diagnosis.
  std::vector<double> per_test_memory_median;
  std::vector<double> per_test_energy_median;
};

// runs is indexed [test][repetition]. Throws std::invalid_argument when there
// are no tests or no repetitions.
VariantAggregates AggregateMedians(
    const std::vector<std::vector<ExecutionResult>>& runs);

enum class Verdict { kOk, kDegraded };

struct KpiEntry {
  std::string name;
  double baseline = 0;
  double enforcer = 0;
  double threshold = 0;
  Verdict verdict = Verdict::kOk;
  std::string detail;
};

struct FunctionalFailure {
  std::size_t test = 0;
  std::size_t repetition = 0;
  std::string reason;
};

struct FunctionalSummary {
  std::vector<std::size_t> failing_tests;
  std::vector<FunctionalFailure> failures;
  std::vector<PolicyViolation> policy_violations;  // enforcer side only

  bool pass() const { return failing_tests.empty(); }
};

struct DegradationReport {
  std::vector<KpiEntry> kpis;  // responsiveness, launch_time, memory, energy
  Verdict overall = Verdict::kOk;
  FunctionalSummary functional;
  VariantAggregates baseline;
  VariantAggregates enforcer;
};

// Applies the four degradation rules. Responsiveness and launch time are
// absolute limits that count only when the baseline stays within them; memory
// and energy are relative overheads. All comparisons are strict.
DegradationReport Compare(const VariantAggregates& base,
                          const VariantAggregates& enf, const Thresholds& t);

// A test fails functionally if any repetition's oracle verdict failed (or the
// enforcer broke the policy, when a monitor was supplied).
FunctionalSummary SummarizeFunctional(
    const SuiteSamples& samples,
    const std::vector<PolicyViolation>& violations = {});

DegradationReport BuildReport(const SuiteSamples& samples, const Thresholds& t,
                              const std::vector<PolicyViolation>& violations = {});

std::string RenderReportJson(const DegradationReport& report);
std::string RenderReportTable(const DegradationReport& report);

// 0 when clean, 1 on any degradation or functional failure.
int ExitCodeHint(const DegradationReport& report);

}  // namespace enftest

#endif  // ENFTEST_PERF_H_
