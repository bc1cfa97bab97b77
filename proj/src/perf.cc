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

#include "enftest/perf.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace enftest {

using nlohmann::json;

void Thresholds::Validate() const {
  for (double v : {responsiveness_ms, launch_ms, memory_overhead_pct,
                   energy_overhead_pct}) {
    if (!(v > 0)) throw std::invalid_argument("thresholds must be positive");
  }
}

double Median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of no samples");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2;
}

VariantAggregates AggregateMedians(
    const std::vector<std::vector<ExecutionResult>>& runs) {
  if (runs.empty() || runs.front().empty()) {
    throw std::invalid_argument("no samples to aggregate");
  }
  const std::size_t reps = runs.front().size();
  VariantAggregates a;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    a.launch_samples.push_back(runs.front().at(rep).kpis.launch_ms);
    double peak = 0;
    double energy = 0;
    for (const auto& test_runs : runs) {
      const auto& k = test_runs.at(rep).kpis;
      peak = std::max(peak, k.peak_memory_kb);
      energy += k.energy_units;
    }
    a.peak_memory_samples.push_back(peak);
    a.energy_samples.push_back(energy);
  }
  a.launch_median = Median(a.launch_samples);
  a.peak_memory_median = Median(a.peak_memory_samples);
  a.energy_median = Median(a.energy_samples);

  for (const auto& test_runs : runs) {
    std::map<std::size_t, std::vector<double>> by_position;
    std::vector<double> mem;
    std::vector<double> energy;
    for (const auto& r : test_runs) {
      for (std::size_t i = 0; i < r.kpis.action_handler_ms.size(); ++i) {
        by_position[i].push_back(r.kpis.action_handler_ms[i]);
      }
      mem.push_back(r.kpis.peak_memory_kb);
      energy.push_back(r.kpis.energy_units);
    }
    for (auto& [pos, values] : by_position) {
      a.max_handler_median = std::max(a.max_handler_median, Median(values));
    }
    a.per_test_memory_median.push_back(Median(mem));
    a.per_test_energy_median.push_back(Median(energy));
  }
  return a;
}

namespace {

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

KpiEntry AbsoluteRule(std::string name, double base, double enf, double limit,
                      const char* unit) {
  KpiEntry e{std::move(name), base, enf, limit, Verdict::kOk, {}};
  if (enf > limit && base <= limit) {
    e.verdict = Verdict::kDegraded;
    e.detail = "exceeds " + Fixed(limit) + " " + unit +
               " only with the enforcer active";
  } else if (enf > limit) {
    e.detail = "baseline already exceeds " + Fixed(limit) + " " + unit;
  } else {
    e.detail = "within " + Fixed(limit) + " " + unit;
  }
  return e;
}

KpiEntry RelativeRule(std::string name, double base, double enf,
                      double limit_pct) {
  KpiEntry e{std::move(name), base, enf, limit_pct, Verdict::kOk, {}};
  if (base == 0) {
    if (enf != 0) {
      e.verdict = Verdict::kDegraded;
      e.detail = "undefined relative overhead (baseline is 0)";
    } else {
      e.detail = "overhead 0.00%";
    }
    return e;
  }
  // Scale before dividing so whole-percent overheads come out exact.
  const double overhead = (enf - base) * 100 / base;
  if (overhead > limit_pct) e.verdict = Verdict::kDegraded;
  e.detail = "overhead " + Fixed(overhead) + "% (limit " + Fixed(limit_pct) + "%)";
  return e;
}

}  // namespace

DegradationReport Compare(const VariantAggregates& base,
                          const VariantAggregates& enf, const Thresholds& t) {
  t.Validate();
  DegradationReport r;
  r.kpis.push_back(AbsoluteRule("responsiveness", base.max_handler_median,
                                enf.max_handler_median, t.responsiveness_ms,
                                "ms"));
  r.kpis.push_back(AbsoluteRule("launch_time", base.launch_median,
                                enf.launch_median, t.launch_ms, "ms"));
  r.kpis.push_back(RelativeRule("memory", base.peak_memory_median,
                                enf.peak_memory_median, t.memory_overhead_pct));
  r.kpis.push_back(RelativeRule("energy", base.energy_median, enf.energy_median,
                                t.energy_overhead_pct));
  const bool degraded = std::any_of(r.kpis.begin(), r.kpis.end(), [](const auto& k) {
    return k.verdict == Verdict::kDegraded;
  });
  r.overall = degraded ? Verdict::kDegraded : Verdict::kOk;
  r.baseline = base;
  r.enforcer = enf;
  return r;
}

FunctionalSummary SummarizeFunctional(
    const SuiteSamples& samples, const std::vector<PolicyViolation>& violations) {
  FunctionalSummary f;
  std::set<std::size_t> failing;
  for (const auto& v : samples.verdicts) {
    if (v.verdict.pass) continue;
    failing.insert(v.test);
    std::string reason = v.verdict.reason;
    if (v.verdict.index) reason += " at index " + std::to_string(*v.verdict.index);
    f.failures.push_back({v.test, v.repetition, std::move(reason)});
  }
  for (const auto& p : violations) {
    if (p.variant != "enforcer") continue;
    failing.insert(p.test);
    f.policy_violations.push_back(p);
    f.failures.push_back({p.test, p.repetition,
                          "policy violated at index " + std::to_string(p.at)});
  }
  f.failing_tests.assign(failing.begin(), failing.end());
  return f;
}

DegradationReport BuildReport(const SuiteSamples& samples, const Thresholds& t,
                              const std::vector<PolicyViolation>& violations) {
  auto report = Compare(AggregateMedians(samples.baseline),
                        AggregateMedians(samples.enforcer), t);
  report.functional = SummarizeFunctional(samples, violations);
  return report;
}

namespace {

const char* VerdictName(Verdict v) {
  return v == Verdict::kOk ? "ok" : "degraded";
}

json AggregatesToJson(const VariantAggregates& a) {
  return {{"launch_median", a.launch_median},
          {"max_handler_median", a.max_handler_median},
          {"peak_memory_median", a.peak_memory_median},
          {"energy_median", a.energy_median},
          {"launch_samples", a.launch_samples},
          {"peak_memory_samples", a.peak_memory_samples},
          {"energy_samples", a.energy_samples},
          {"per_test_memory_median", a.per_test_memory_median},
          {"per_test_energy_median", a.per_test_energy_median}};
}

}  // namespace

std::string RenderReportJson(const DegradationReport& report) {
  json kpis = json::array();
  for (const auto& k : report.kpis) {
    kpis.push_back({{"name", k.name},
                    {"baseline", k.baseline},
                    {"enforcer", k.enforcer},
                    {"threshold", k.threshold},
                    {"verdict", VerdictName(k.verdict)},
                    {"detail", k.detail}});
  }
  json failures = json::array();
  for (const auto& f : report.functional.failures) {
    failures.push_back(
        {{"test", f.test}, {"repetition", f.repetition}, {"reason", f.reason}});
  }
  json functional = {{"status", report.functional.pass() ? "pass" : "fail"},
                     {"failing_tests", report.functional.failing_tests},
                     {"failures", failures},
                     {"policy_violations", report.functional.policy_violations.size()}};
  json doc = {{"kpis", kpis},
              {"overall", VerdictName(report.overall)},
              {"functional", functional},
              {"exit_code_hint", ExitCodeHint(report)},
              {"samples",
               {{"baseline", AggregatesToJson(report.baseline)},
                {"enforcer", AggregatesToJson(report.enforcer)}}}};
  return doc.dump(2) + "\n";
}

std::string RenderReportTable(const DegradationReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %14s %14s %12s  %-9s %s\n", "KPI",
                "baseline", "enforcer", "threshold", "verdict", "detail");
  out << line;
  for (const auto& k : report.kpis) {
    std::snprintf(line, sizeof line, "%-16s %14.2f %14.2f %12.2f  %-9s %s\n",
                  k.name.c_str(), k.baseline, k.enforcer, k.threshold,
                  VerdictName(k.verdict), k.detail.c_str());
    out << line;
  }
  out << "overall: " << VerdictName(report.overall) << "\n";
  out << "functional: " << (report.functional.pass() ? "pass" : "fail");
  if (!report.functional.pass()) {
    out << " (failing tests:";
    for (auto t : report.functional.failing_tests) out << " " << t;
    out << ")";
  }
  out << "\n";
  return out.str();
}

int ExitCodeHint(const DegradationReport& report) {
  return report.overall == Verdict::kDegraded || !report.functional.pass() ? 1
                                                                           : 0;
}

}  // namespace enftest
