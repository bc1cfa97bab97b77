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

#include "enftest/runner.h"

#include <algorithm>
#include <future>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace enftest {

using nlohmann::json;

Deployment Deployment::Baseline() { return Deployment(); }

Deployment Deployment::Enforcer(std::shared_ptr<const EnforcementModel> model,
                                EnforcerCosts costs) {
  if (!model) throw std::invalid_argument("enforcer deployment needs a model");
  Deployment d;
  d.model_ = std::move(model);
  d.costs_ = costs;
  return d;
}

Deployment Deployment::WithFault(FaultSpec fault) const {
  if (!is_enforcer()) {
    throw std::invalid_argument("faults can only be injected into an enforcer");
  }
  if (fault.magnitude < 0) {
    throw std::invalid_argument("fault magnitude must be >= 0");
  }
  Deployment d = *this;
  d.fault_ = fault;
  return d;
}

Deployment InjectFault(const Deployment& deployment, FaultSpec fault) {
  return deployment.WithFault(fault);
}

namespace {

class MemoryAccountant {
 public:
  void Allocate(double kb) {
    current_ += kb;
    peak_ = std::max(peak_, current_);
  }
  void Free(double kb) { current_ -= kb; }
  double peak() const { return peak_; }

 private:
  double current_ = 0;
  double peak_ = 0;
};

}  // namespace

ExecutionResult ExecuteTest(AppDriver& driver, const Deployment& deployment,
                            const ConcreteTest& test, const RunConfig& config) {
  ExecutionResult r;
  MemoryAccountant memory;
  const LaunchResult launch = driver.Reset();
  memory.Allocate(launch.launch_cost.alloc_kb);
  r.kpis.launch_ms = launch.launch_ms;
  double energy =
      config.energy_alpha * launch.launch_cost.cpu_ms + launch.launch_cost.energy_units;

  std::unique_ptr<EnforcerRuntime> enforcer;
  if (deployment.is_enforcer()) {
    enforcer = std::make_unique<EnforcerRuntime>(
        *deployment.model(), deployment.costs(), deployment.fault(),
        config.clock, config.seed);
    r.kpis.launch_ms += enforcer->Initialize();
    memory.Allocate(deployment.costs().bookkeeping_kb);
  }

  auto finish = [&] {
    r.kpis.peak_memory_kb = memory.peak();
    r.kpis.energy_units = energy;
    return r;
  };

  for (std::size_t i = 0; i < test.actions.size(); ++i) {
    StepResult step;
    try {
      step = driver.Perform(test.actions[i]);
    } catch (const DriverError& e) {
      r.error = "action " + std::to_string(i) + ": " + e.what();
      return finish();
    }
    double handler_ms = step.cost.cpu_ms;
    double cpu_ms = step.cost.cpu_ms;
    memory.Allocate(step.cost.alloc_kb);
    for (const auto& event : step.emitted) {
      r.req_trace.push_back(event);
      if (!enforcer || !deployment.model()->InAlphabet(event)) {
        r.api_trace.push_back(event);
        continue;
      }
      const StateId before = enforcer->state();
      const auto handled = enforcer->Intercept(event);
      if (!handled) {
        r.error = "enforcement model has no transition for " + event +
                  " in state " + before + " (action " + std::to_string(i) + ")";
        return finish();
      }
      r.api_trace.insert(r.api_trace.end(), handled->outputs.begin(),
                         handled->outputs.end());
      handler_ms += handled->handler_ms;
      cpu_ms += handled->cpu_ms;
      memory.Allocate(handled->alloc_kb);
    }
    memory.Free(step.cost.free_kb);
    r.kpis.action_handler_ms.push_back(handler_ms);
    energy += config.energy_alpha * cpu_ms + step.cost.energy_units;
  }
  return finish();
}

namespace {

std::optional<std::size_t> FirstMismatch(const EventList& a, const EventList& b,
                                         std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to; ++i) {
    if (i >= a.size() || i >= b.size() || a[i] != b[i]) return i;
  }
  return std::nullopt;
}

OracleVerdict Fail(std::string reason, std::size_t index) {
  return {false, std::move(reason), index};
}

}  // namespace

OracleVerdict CheckOracle(const ConcreteTest& test, const EventList& alphabet,
                          const EventList& baseline_trace,
                          const EventList& enforcer_trace) {
  const EventList base = FilterToAlphabet(baseline_trace, alphabet);
  const EventList enf = FilterToAlphabet(enforcer_trace, alphabet);
  if (test.oracle.kind == OracleKind::kTransparent) {
    const auto end = std::max(base.size(), enf.size());
    if (const auto i = FirstMismatch(base, enf, 0, end)) {
      return Fail("transparent enforcement violated: traces differ", *i);
    }
    return {};
  }

  // Align the oracle with the first occurrence of the target in the baseline
  // trace; setup events before it must be left alone.
  const SequenceMatcher matcher(test.target);
  std::optional<std::size_t> offset;
  std::size_t state = matcher.start();
  if (matcher.Accepting(state)) offset = 0;
  for (std::size_t i = 0; i < base.size() && !offset; ++i) {
    state = matcher.Advance(state, base[i]);
    if (matcher.Accepting(state)) offset = i + 1 - test.target.size();
  }
  if (!offset) {
    return Fail("target sequence not exercised by the baseline run", base.size());
  }
  const std::size_t aligned = *offset + test.oracle.divergence_index.value_or(0);
  if (const auto i = FirstMismatch(base, enf, 0, aligned)) {
    return Fail("traces differ before the enforcement point", *i);
  }
  const auto& expected = test.oracle.expected_api_outputs;
  for (std::size_t j = 0; j < expected.size(); ++j) {
    const std::size_t i = *offset + j;
    if (i >= enf.size() || enf[i] != expected[j]) {
      return Fail("enforcer output differs from the model prediction", i);
    }
  }
  return {};
}

SuiteSamples RunSuite(const DriverFactory& driver_factory,
                      const std::vector<ConcreteTest>& tests,
                      const Deployment& baseline, const Deployment& enforcer,
                      const RunConfig& config) {
  if (tests.empty()) throw std::invalid_argument("test suite is empty");
  if (config.repetitions == 0) {
    throw std::invalid_argument("repetitions must be >= 1");
  }
  if (baseline.is_enforcer() || !enforcer.is_enforcer()) {
    throw std::invalid_argument("expected a (baseline, enforcer) pair");
  }

  auto run_variant = [&](const Deployment& deployment) {
    auto driver = driver_factory();
    std::vector<std::vector<ExecutionResult>> runs(tests.size());
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      for (std::size_t t = 0; t < tests.size(); ++t) {
        runs[t].push_back(ExecuteTest(*driver, deployment, tests[t], config));
      }
    }
    return runs;
  };
  auto base_future = std::async(std::launch::async, run_variant, baseline);
  auto enf_future = std::async(std::launch::async, run_variant, enforcer);

  SuiteSamples samples;
  samples.repetitions = config.repetitions;
  samples.clock = config.clock;
  samples.seed = config.seed;
  samples.energy_alpha = config.energy_alpha;
  samples.alphabet = enforcer.model()->alphabet();
  samples.fault = enforcer.fault();
  samples.baseline = base_future.get();
  samples.enforcer = enf_future.get();

  for (std::size_t t = 0; t < tests.size(); ++t) {
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      const auto& b = samples.baseline[t][rep];
      const auto& e = samples.enforcer[t][rep];
      OracleVerdict v;
      if (b.error || e.error) {
        v = {false, "test error: " + (b.error ? "baseline: " + *b.error
                                              : "enforcer: " + *e.error),
             std::nullopt};
      } else {
        v = CheckOracle(tests[t], samples.alphabet, b.api_trace, e.api_trace);
      }
      samples.verdicts.push_back({t, rep, v});
    }
  }
  return samples;
}

std::vector<PolicyViolation> CheckSamplesAgainstPolicy(
    const SuiteSamples& samples, const PolicyMonitor& monitor) {
  std::vector<PolicyViolation> out;
  auto scan = [&](const char* variant, const auto& runs) {
    for (std::size_t t = 0; t < runs.size(); ++t) {
      for (std::size_t rep = 0; rep < runs[t].size(); ++rep) {
        const auto trace = FilterToAlphabet(runs[t][rep].api_trace,
                                            monitor.alphabet());
        const auto verdict = CheckPolicy(monitor, trace);
        if (const auto* v = std::get_if<Violated>(&verdict)) {
          out.push_back({variant, t, rep, v->at});
        }
      }
    }
  };
  scan("baseline", samples.baseline);
  scan("enforcer", samples.enforcer);
  return out;
}

namespace {

const char* ClockName(ClockMode c) {
  return c == ClockMode::kVirtual ? "virtual" : "wall";
}

json RunToJson(const ExecutionResult& r, std::size_t rep) {
  json j = {{"repetition", rep},
            {"req_trace", r.req_trace},
            {"api_trace", r.api_trace},
            {"launch_ms", r.kpis.launch_ms},
            {"action_handler_ms", r.kpis.action_handler_ms},
            {"peak_memory_kb", r.kpis.peak_memory_kb},
            {"energy_units", r.kpis.energy_units}};
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  return j;
}

ExecutionResult RunFromJson(const json& j) {
  ExecutionResult r;
  r.req_trace = j.at("req_trace").get<EventList>();
  r.api_trace = j.at("api_trace").get<EventList>();
  r.kpis.launch_ms = j.at("launch_ms").get<double>();
  r.kpis.action_handler_ms = j.at("action_handler_ms").get<std::vector<double>>();
  r.kpis.peak_memory_kb = j.at("peak_memory_kb").get<double>();
  r.kpis.energy_units = j.at("energy_units").get<double>();
  if (j.contains("error") && !j.at("error").is_null()) {
    r.error = j.at("error").get<std::string>();
  }
  return r;
}

std::string Number(double v) { return json(v).dump(); }

}  // namespace

std::string ExportSamplesJson(const SuiteSamples& s) {
  json tests = json::array();
  for (std::size_t t = 0; t < s.test_count(); ++t) {
    json base = json::array();
    json enf = json::array();
    for (std::size_t rep = 0; rep < s.baseline[t].size(); ++rep) {
      base.push_back(RunToJson(s.baseline[t][rep], rep));
    }
    for (std::size_t rep = 0; rep < s.enforcer[t].size(); ++rep) {
      enf.push_back(RunToJson(s.enforcer[t][rep], rep));
    }
    tests.push_back({{"id", t}, {"baseline", base}, {"enforcer", enf}});
  }
  json verdicts = json::array();
  for (const auto& v : s.verdicts) {
    json j = {{"test", v.test},
              {"repetition", v.repetition},
              {"pass", v.verdict.pass},
              {"reason", v.verdict.reason}};
    j["index"] = v.verdict.index ? json(*v.verdict.index) : json(nullptr);
    verdicts.push_back(j);
  }
  json config = {{"repetitions", s.repetitions},
                 {"clock", ClockName(s.clock)},
                 {"seed", s.seed},
                 {"energy_alpha", s.energy_alpha},
                 {"alphabet", s.alphabet}};
  config["fault"] = s.fault ? json(FormatFault(*s.fault)) : json(nullptr);
  json doc = {{"config", config}, {"tests", tests}, {"verdicts", verdicts}};
  return doc.dump(2) + "\n";
}

std::string ExportSamplesCsv(const SuiteSamples& s) {
  std::ostringstream out;
  out << "test_id,variant,repetition,launch_ms,max_handler_ms,peak_memory_kb,"
         "energy_units\n";
  auto rows = [&](const char* variant, const auto& runs) {
    for (std::size_t t = 0; t < runs.size(); ++t) {
      for (std::size_t rep = 0; rep < runs[t].size(); ++rep) {
        const auto& k = runs[t][rep].kpis;
        const double max_handler =
            k.action_handler_ms.empty()
                ? 0
                : *std::max_element(k.action_handler_ms.begin(),
                                    k.action_handler_ms.end());
        out << t << ',' << variant << ',' << rep << ',' << Number(k.launch_ms)
            << ',' << Number(max_handler) << ',' << Number(k.peak_memory_kb)
            << ',' << Number(k.energy_units) << '\n';
      }
    }
  };
  rows("baseline", s.baseline);
  rows("enforcer", s.enforcer);
  return out.str();
}

SuiteSamples ImportSamplesJson(std::string_view text) {
  SuiteSamples s;
  try {
    const json doc = json::parse(text);
    const auto& c = doc.at("config");
    s.repetitions = c.at("repetitions").get<std::size_t>();
    const auto clock = c.at("clock").get<std::string>();
    if (clock != "virtual" && clock != "wall") {
      throw std::invalid_argument("unknown clock '" + clock + "'");
    }
    s.clock = clock == "virtual" ? ClockMode::kVirtual : ClockMode::kWall;
    s.seed = c.at("seed").get<std::uint64_t>();
    s.energy_alpha = c.at("energy_alpha").get<double>();
    s.alphabet = c.at("alphabet").get<EventList>();
    if (!c.at("fault").is_null()) {
      s.fault = ParseFault(c.at("fault").get<std::string>());
    }
    for (const auto& t : doc.at("tests")) {
      std::vector<ExecutionResult> base;
      std::vector<ExecutionResult> enf;
      for (const auto& r : t.at("baseline")) base.push_back(RunFromJson(r));
      for (const auto& r : t.at("enforcer")) enf.push_back(RunFromJson(r));
      s.baseline.push_back(std::move(base));
      s.enforcer.push_back(std::move(enf));
    }
    for (const auto& v : doc.at("verdicts")) {
      VerdictRecord rec;
      rec.test = v.at("test").get<std::size_t>();
      rec.repetition = v.at("repetition").get<std::size_t>();
      rec.verdict.pass = v.at("pass").get<bool>();
      rec.verdict.reason = v.at("reason").get<std::string>();
      if (!v.at("index").is_null()) rec.verdict.index = v.at("index").get<std::size_t>();
      s.verdicts.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed samples file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed samples file: ") + e.what());
  }
  for (std::size_t t = 0; t < s.test_count(); ++t) {
    if (s.baseline[t].size() != s.repetitions ||
        s.enforcer[t].size() != s.repetitions) {
      throw std::runtime_error(
          "malformed samples file: repetition count mismatch for test " +
          std::to_string(t));
    }
  }
  return s;
}

}  // namespace enftest
