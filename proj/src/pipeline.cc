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

#include "enftest/pipeline.h"

#include <cstdlib>
#include <memory>
#include <stdexcept>

#include "enftest/json_io.h"
#include "json.hpp"

namespace enftest {

using nlohmann::json;

fs::path DefaultOutputDir() {
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "enftest-out";
}

std::string ExportHsiSuite(const HsiSuite& suite) {
  json seqs = json::array();
  for (const auto& e : suite.entries) {
    seqs.push_back(
        {{"events", e.sequence}, {"prefix", e.prefix}, {"suffix", e.suffix}});
  }
  json doc = {{"sequences", seqs}, {"diagnostics", suite.diagnostics}};
  return doc.dump(2) + "\n";
}

std::vector<InputSequence> ImportHsiSuite(std::string_view text) {
  std::vector<InputSequence> out;
  try {
    const json doc = json::parse(text);
    for (const auto& s : doc.at("sequences")) {
      out.push_back(s.at("events").get<InputSequence>());
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed suite file: ") + e.what());
  }
  return out;
}

std::string ExportSequences(const std::vector<InputSequence>& sequences) {
  json doc = json::array();
  for (const auto& s : sequences) doc.push_back(s);
  return doc.dump(2) + "\n";
}

Thresholds ParseThresholds(std::string_view text, Thresholds base) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw std::runtime_error("thresholds must be an object");
    auto read = [&](const char* key, double& slot) {
      if (j.contains(key)) slot = j.at(key).get<double>();
    };
    read("responsiveness_ms", base.responsiveness_ms);
    read("launch_ms", base.launch_ms);
    read("memory_overhead_pct", base.memory_overhead_pct);
    read("energy_overhead_pct", base.energy_overhead_pct);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed thresholds file: ") +
                             e.what());
  }
  base.Validate();
  return base;
}

namespace {

std::shared_ptr<const AppSpec> LoadApp(const fs::path& path) {
  return std::make_shared<const AppSpec>(LoadAppSpec(ReadFile(path)));
}

std::shared_ptr<const EnforcementModel> LoadModel(const fs::path& path) {
  return std::make_shared<const EnforcementModel>(ParseModel(ReadFile(path)));
}

template <typename Fn>
int Guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace

int CmdValidateModel(const fs::path& model, const std::optional<fs::path>& policy,
                     std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const auto m = LoadModel(model);
    out << model.string() << ": " << m->states().size() << " states, "
        << m->transitions().size() << " transitions, alphabet of "
        << m->alphabet().size() << "\n";
    if (policy) {
      const auto p = ParsePolicyMonitor(ReadFile(*policy));
      out << policy->string() << ": " << p.states().size() << " states, "
          << p.violating().size() << " violating\n";
    }
    return kExitClean;
  });
}

int CmdGen(const fs::path& model, const fs::path& suite_out, bool prefix_free,
           std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const auto m = LoadModel(model);
    HsiOptions options;
    options.prefix_free = prefix_free;
    const auto suite = GenerateHsiSuite(*m, options);
    for (const auto& d : suite.diagnostics) err << "warning: " << d << "\n";
    WriteFile(suite_out, ExportHsiSuite(suite));
    out << suite.entries.size() << " sequences written to " << suite_out.string()
        << "\n";
    return kExitClean;
  });
}

int CmdRip(const fs::path& app, const fs::path& model, std::size_t budget,
           const std::set<std::string>& ignore_keys, const fs::path& gui_out,
           std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const auto spec = LoadApp(app);
    const auto m = LoadModel(model);
    SimulatedApp driver(spec, ignore_keys);
    const auto gui = Rip(driver, m->alphabet(), budget);
    WriteFile(gui_out, ExportGuiModel(gui));
    out << gui.nodes.size() << " nodes, " << gui.edges.size()
        << " edges written to " << gui_out.string() << "\n";
    return kExitClean;
  });
}

int CmdConcretize(const fs::path& gui, const fs::path& app, const fs::path& model,
                  const fs::path& suite, std::size_t k, MatchMode match,
                  const std::set<std::string>& ignore_keys,
                  const fs::path& tests_out, const fs::path& uncoverable_out,
                  std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    if (k == 0) throw std::invalid_argument("--k must be >= 1");
    const auto g = ImportGuiModel(ReadFile(gui));
    const auto spec = LoadApp(app);
    const auto m = LoadModel(model);
    const auto sequences = ImportHsiSuite(ReadFile(suite));
    for (const auto& s : sequences) RunTrace(*m, s);
    SimulatedApp driver(spec, ignore_keys);
    const auto result = ConcretizeSuite(g, driver, *m, sequences, {k, match});
    for (const auto& d : result.diagnostics) err << "note: " << d << "\n";
    WriteFile(tests_out, ExportTests(result.tests));
    WriteFile(uncoverable_out, ExportSequences(result.uncoverable));
    out << result.tests.size() << " concrete tests written to "
        << tests_out.string() << ", " << result.uncoverable.size()
        << " uncoverable\n";
    for (const auto& u : result.uncoverable) {
      out << "  uncoverable: [" << JoinEvents(u) << "]\n";
    }
    return result.uncoverable.empty() ? kExitClean : kExitUncoverable;
  });
}

int CmdRun(const fs::path& tests, const fs::path& app, const fs::path& model,
           const RunConfig& config, const EnforcerCosts& costs,
           const std::optional<FaultSpec>& fault,
           const std::set<std::string>& ignore_keys, const fs::path& samples_out,
           std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const auto t = ImportTests(ReadFile(tests));
    const auto spec = LoadApp(app);
    const auto m = LoadModel(model);
    auto enforcer = Deployment::Enforcer(m, costs);
    if (fault) enforcer = InjectFault(enforcer, *fault);
    const auto samples = RunSuite(SimulatorFactory(spec, ignore_keys), t,
                                  Deployment::Baseline(), enforcer, config);
    WriteFile(samples_out, ExportSamplesJson(samples));
    auto csv = samples_out;
    csv.replace_extension(".csv");
    WriteFile(csv, ExportSamplesCsv(samples));
    out << t.size() << " tests x " << config.repetitions
        << " repetitions x 2 variants written to " << samples_out.string()
        << "\n";
    return kExitClean;
  });
}

int CmdCompare(const fs::path& samples, const Thresholds& thresholds,
               const std::optional<fs::path>& policy, const fs::path& report_out,
               std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const auto s = ImportSamplesJson(ReadFile(samples));
    std::vector<PolicyViolation> violations;
    if (policy) {
      violations =
          CheckSamplesAgainstPolicy(s, ParsePolicyMonitor(ReadFile(*policy)));
    }
    const auto report = BuildReport(s, thresholds, violations);
    WriteFile(report_out, RenderReportJson(report));
    out << RenderReportTable(report);
    return ExitCodeHint(report);
  });
}

int CmdPipeline(const PipelineConfig& c, std::ostream& out, std::ostream& err) {
  const fs::path suite = c.out_dir / "suite.json";
  const fs::path gui = c.out_dir / "gui-model.json";
  const fs::path tests = c.out_dir / "tests.json";
  const fs::path uncoverable = c.out_dir / "uncoverable.json";
  const fs::path samples = c.out_dir / "samples.json";
  const fs::path report = c.out_dir / "report.json";

  if (int rc = CmdGen(c.model_path, suite, false, out, err); rc != kExitClean) {
    return rc;
  }
  if (int rc = CmdRip(c.app_path, c.model_path, c.rip_budget, c.ignore_keys, gui,
                      out, err);
      rc != kExitClean) {
    return rc;
  }
  const int concretized =
      CmdConcretize(gui, c.app_path, c.model_path, suite, c.k, c.match,
                    c.ignore_keys, tests, uncoverable, out, err);
  if (concretized == kExitInputError) return concretized;
  const int has_tests = Guarded(err, [&] {
    return ImportTests(ReadFile(tests)).empty() ? 0 : 1;
  });
  if (has_tests == kExitInputError) return kExitInputError;
  if (has_tests == 0) {
    err << "no sequence could be concretized; nothing to execute\n";
    return kExitUncoverable;
  }
  if (int rc = CmdRun(tests, c.app_path, c.model_path, c.run, c.enforcer_costs,
                      c.fault, c.ignore_keys, samples, out, err);
      rc != kExitClean) {
    return rc;
  }
  return CmdCompare(samples, c.thresholds, c.policy_path, report, out, err);
}

}  // namespace enftest
