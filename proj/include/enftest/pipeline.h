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

#ifndef ENFTEST_PIPELINE_H_
#define ENFTEST_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "enftest/concretizer.h"
#include "enftest/hsi.h"
#include "enftest/perf.h"
#include "enftest/ripper.h"
#include "enftest/runner.h"

namespace enftest {

namespace fs = std::filesystem;

// Process exit codes shared by every subcommand.
inline constexpr int kExitClean = 0;
inline constexpr int kExitFinding = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitUncoverable = 3;

// Default output directory when --out is not given.
inline constexpr const char* kOutDirEnv = "ENFTEST_OUT_DIR";
fs::path DefaultOutputDir();

struct PipelineConfig {
  fs::path model_path;
  fs::path app_path;
  std::optional<fs::path> policy_path;
  std::size_t k = 10;
  std::size_t rip_budget = 1000;
  MatchMode match = MatchMode::kSubstring;
  std::set<std::string> ignore_keys;
  RunConfig run;
  EnforcerCosts enforcer_costs;
  std::optional<FaultSpec> fault;
  Thresholds thresholds;
  fs::path out_dir;
};

std::string ExportHsiSuite(const HsiSuite& suite);
std::vector<InputSequence> ImportHsiSuite(std::string_view text);

// Partial JSON object; keys that are present override `base`.
Thresholds ParseThresholds(std::string_view text, Thresholds base = {});

std::string ExportSequences(const std::vector<InputSequence>& sequences);

// Subcommands. Each writes its artifacts, reports a summary on out and
// problems on err, and returns a process exit code.
int CmdValidateModel(const fs::path& model, const std::optional<fs::path>& policy,
                     std::ostream& out, std::ostream& err);
int CmdGen(const fs::path& model, const fs::path& suite_out, bool prefix_free,
           std::ostream& out, std::ostream& err);
int CmdRip(const fs::path& app, const fs::path& model, std::size_t budget,
           const std::set<std::string>& ignore_keys, const fs::path& gui_out,
           std::ostream& out, std::ostream& err);
// Returns kExitUncoverable when any sequence could not be concretized.
int CmdConcretize(const fs::path& gui, const fs::path& app, const fs::path& model,
                  const fs::path& suite, std::size_t k, MatchMode match,
                  const std::set<std::string>& ignore_keys,
                  const fs::path& tests_out, const fs::path& uncoverable_out,
                  std::ostream& out, std::ostream& err);
// Writes samples JSON to samples_out and the flat CSV next to it.
int CmdRun(const fs::path& tests, const fs::path& app, const fs::path& model,
           const RunConfig& config, const EnforcerCosts& costs,
           const std::optional<FaultSpec>& fault,
           const std::set<std::string>& ignore_keys, const fs::path& samples_out,
           std::ostream& out, std::ostream& err);
int CmdCompare(const fs::path& samples, const Thresholds& thresholds,
               const std::optional<fs::path>& policy, const fs::path& report_out,
               std::ostream& out, std::ostream& err);
// Chains every stage into config.out_dir. Exit code is the comparison's, or
// kExitUncoverable when no sequence could be concretized at all.
int CmdPipeline(const PipelineConfig& config, std::ostream& out,
                std::ostream& err);

}  // namespace enftest

#endif  // ENFTEST_PIPELINE_H_
