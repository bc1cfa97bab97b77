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

// Command-line entry point: gen, rip, concretize, run, compare, pipeline and
// validate-model.

#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "enftest/json_io.h"
#include "enftest/pipeline.h"

namespace {

using enftest::fs::path;

struct Flags {
  std::string model, app, policy, suite, gui_model, tests, samples, out;
  std::string clock = "virtual";
  std::string fault;
  std::string thresholds;
  std::size_t k = 10;
  std::size_t reps = 10;
  std::size_t budget = 1000;
  std::uint64_t seed = 0;
  double energy_alpha = 1.0;
  double bookkeeping_kb = enftest::EnforcerCosts{}.bookkeeping_kb;
  std::optional<double> responsiveness_ms, launch_ms, memory_pct, energy_pct;
  std::vector<std::string> ignore_keys;
  bool strict_match = false;
  bool prefix_free = false;
};

path OutDir(const Flags& f) {
  return f.out.empty() ? enftest::DefaultOutputDir() : path(f.out);
}

// Flags override the thresholds file, which overrides the defaults.
enftest::Thresholds ResolveThresholds(const Flags& f) {
  enftest::Thresholds t;
  if (!f.thresholds.empty()) {
    t = enftest::ParseThresholds(enftest::ReadFile(f.thresholds), t);
  }
  if (f.responsiveness_ms) t.responsiveness_ms = *f.responsiveness_ms;
  if (f.launch_ms) t.launch_ms = *f.launch_ms;
  if (f.memory_pct) t.memory_overhead_pct = *f.memory_pct;
  if (f.energy_pct) t.energy_overhead_pct = *f.energy_pct;
  t.Validate();
  return t;
}

enftest::RunConfig ResolveRunConfig(const Flags& f) {
  enftest::RunConfig c;
  c.repetitions = f.reps;
  c.clock = f.clock == "wall" ? enftest::ClockMode::kWall
                              : enftest::ClockMode::kVirtual;
  c.energy_alpha = f.energy_alpha;
  c.seed = f.seed;
  return c;
}

std::optional<enftest::FaultSpec> ResolveFault(const Flags& f) {
  if (f.fault.empty()) return std::nullopt;
  return enftest::ParseFault(f.fault);
}

enftest::EnforcerCosts ResolveCosts(const Flags& f) {
  enftest::EnforcerCosts c;
  c.bookkeeping_kb = f.bookkeeping_kb;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Test generation and performance gating for runtime enforcers"};
  cli.require_subcommand(1);
  Flags f;

  auto model_opt = [&](CLI::App* sc) {
    sc->add_option("--model", f.model, "enforcement model file")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto app_opt = [&](CLI::App* sc) {
    sc->add_option("--app", f.app, "app specification (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto out_opt = [&](CLI::App* sc) {
    sc->add_option("--out", f.out,
                   std::string("output directory (default $") +
                       enftest::kOutDirEnv + " or ./enftest-out)");
  };
  auto ignore_opt = [&](CLI::App* sc) {
    sc->add_option("--ignore-key", f.ignore_keys,
                   "view property excluded from state signatures");
  };
  auto match_opt = [&](CLI::App* sc) {
    sc->add_flag("--strict-match", f.strict_match,
                 "require the whole traced sequence to equal the target");
  };
  auto k_opt = [&](CLI::App* sc) {
    sc->add_option("--k", f.k, "candidate paths per sequence")
        ->check(CLI::PositiveNumber);
  };
  auto run_opts = [&](CLI::App* sc) {
    sc->add_option("--reps", f.reps, "suite repetitions per variant")
        ->check(CLI::PositiveNumber);
    sc->add_option("--clock", f.clock, "virtual or wall")
        ->check(CLI::IsMember({"virtual", "wall"}));
    sc->add_option("--fault", f.fault,
                   "inject kind=value: responsivenessDelay, startupDelay, "
                   "cpuHog, memoryLeak");
    sc->add_option("--seed", f.seed, "seed recorded with the samples");
    sc->add_option("--energy-alpha", f.energy_alpha, "energy units per cpu ms")
        ->check(CLI::NonNegativeNumber);
    sc->add_option("--bookkeeping-kb", f.bookkeeping_kb,
                   "memory held by the enforcer runtime")
        ->check(CLI::NonNegativeNumber);
  };
  auto threshold_opts = [&](CLI::App* sc) {
    sc->add_option("--thresholds", f.thresholds, "thresholds JSON file")
        ->check(CLI::ExistingFile);
    sc->add_option("--responsiveness-ms", f.responsiveness_ms);
    sc->add_option("--launch-ms", f.launch_ms);
    sc->add_option("--memory-pct", f.memory_pct);
    sc->add_option("--energy-pct", f.energy_pct);
    sc->add_option("--policy", f.policy, "policy monitor checked on api traces")
        ->check(CLI::ExistingFile);
  };

  auto* validate = cli.add_subcommand("validate-model", "parse and check a model");
  model_opt(validate);
  validate->add_option("--policy", f.policy, "policy monitor file")
      ->check(CLI::ExistingFile);

  auto* gen = cli.add_subcommand("gen", "generate HSI test sequences");
  model_opt(gen);
  out_opt(gen);
  gen->add_flag("--prefix-free", f.prefix_free,
                "drop sequences that prefix another sequence");

  auto* rip = cli.add_subcommand("rip", "explore the app and trace events");
  app_opt(rip);
  model_opt(rip);
  out_opt(rip);
  ignore_opt(rip);
  rip->add_option("--budget", f.budget, "maximum exploratory actions")
      ->check(CLI::PositiveNumber);

  auto* concretize =
      cli.add_subcommand("concretize", "map sequences to UI-action tests");
  concretize->add_option("--gui-model", f.gui_model)->required()->check(
      CLI::ExistingFile);
  concretize->add_option("--suite", f.suite)->required()->check(
      CLI::ExistingFile);
  app_opt(concretize);
  model_opt(concretize);
  out_opt(concretize);
  k_opt(concretize);
  match_opt(concretize);
  ignore_opt(concretize);

  auto* run = cli.add_subcommand("run", "execute tests with and without enforcer");
  run->add_option("--tests", f.tests)->required()->check(CLI::ExistingFile);
  app_opt(run);
  model_opt(run);
  out_opt(run);
  run_opts(run);
  ignore_opt(run);

  auto* compare = cli.add_subcommand("compare", "detect performance degradation");
  compare->add_option("--samples", f.samples)->required()->check(
      CLI::ExistingFile);
  out_opt(compare);
  threshold_opts(compare);

  auto* pipeline = cli.add_subcommand("pipeline", "run every stage");
  app_opt(pipeline);
  model_opt(pipeline);
  out_opt(pipeline);
  k_opt(pipeline);
  match_opt(pipeline);
  ignore_opt(pipeline);
  run_opts(pipeline);
  threshold_opts(pipeline);
  pipeline->add_option("--budget", f.budget, "maximum exploratory actions")
      ->check(CLI::PositiveNumber);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : enftest::kExitInputError;
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  const std::set<std::string> ignore(f.ignore_keys.begin(), f.ignore_keys.end());
  const auto match = f.strict_match ? enftest::MatchMode::kWhole
                                    : enftest::MatchMode::kSubstring;
  std::optional<path> policy;
  if (!f.policy.empty()) policy = f.policy;

  try {
    if (*validate) return enftest::CmdValidateModel(f.model, policy, out, err);
    if (*gen) {
      return enftest::CmdGen(f.model, OutDir(f) / "suite.json", f.prefix_free,
                             out, err);
    }
    if (*rip) {
      return enftest::CmdRip(f.app, f.model, f.budget, ignore,
                             OutDir(f) / "gui-model.json", out, err);
    }
    if (*concretize) {
      return enftest::CmdConcretize(f.gui_model, f.app, f.model, f.suite, f.k,
                                    match, ignore, OutDir(f) / "tests.json",
                                    OutDir(f) / "uncoverable.json", out, err);
    }
    if (*run) {
      return enftest::CmdRun(f.tests, f.app, f.model, ResolveRunConfig(f),
                             ResolveCosts(f), ResolveFault(f), ignore,
                             OutDir(f) / "samples.json", out, err);
    }
    if (*compare) {
      return enftest::CmdCompare(f.samples, ResolveThresholds(f), policy,
                                 OutDir(f) / "report.json", out, err);
    }
    if (*pipeline) {
      enftest::PipelineConfig c;
      c.model_path = f.model;
      c.app_path = f.app;
      c.policy_path = policy;
      c.k = f.k;
      c.rip_budget = f.budget;
      c.match = match;
      c.ignore_keys = ignore;
      c.run = ResolveRunConfig(f);
      c.enforcer_costs = ResolveCosts(f);
      c.fault = ResolveFault(f);
      c.thresholds = ResolveThresholds(f);
      c.out_dir = OutDir(f);
      return enftest::CmdPipeline(c, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return enftest::kExitInputError;
  }
  return enftest::kExitInputError;
}
