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

#ifndef ENFTEST_CONCRETIZER_H_
#define ENFTEST_CONCRETIZER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enftest/app_sim.h"
#include "enftest/hsi.h"
#include "enftest/model.h"
#include "enftest/ripper.h"

namespace enftest {

enum class MatchMode {
  kSubstring,  // the trace contains the target contiguously
  kWhole,      // the trace equals the target
};

// Deterministic automaton recognising traces that cover a target sequence.
// Substring mode uses the standard failure-function construction; state
// |target| accepts and is absorbing.
class SequenceMatcher {
 public:
  explicit SequenceMatcher(InputSequence target,
                           MatchMode mode = MatchMode::kSubstring);

  std::size_t start() const { return 0; }
  std::size_t accepting_state() const { return target_.size(); }
  // Number of states, including the dead state of whole mode.
  std::size_t state_count() const;
  std::size_t Advance(std::size_t state, const EventName& event) const;
  bool Accepting(std::size_t state) const { return state == target_.size(); }
  bool Covers(const EventList& trace) const;

  const std::vector<std::size_t>& failure() const { return failure_; }

 private:
  InputSequence target_;
  MatchMode mode_;
  std::vector<std::size_t> failure_;
};

// Up to k action paths from the initial node whose concatenated annotations
// cover target, ordered by length and then lexicographically by action
// encoding. A path ends at its first acceptance and never repeats a
// (node, matcher state) pair.
std::vector<ActionPath> KShortestCoveringPaths(
    const AugmentedGuiModel& gui, const InputSequence& target, std::size_t k,
    MatchMode mode = MatchMode::kSubstring);

enum class OracleKind { kTransparent, kActual };

struct OracleSpec {
  OracleKind kind = OracleKind::kTransparent;
  std::optional<std::size_t> divergence_index;  // actual only
  EventList expected_api_outputs;               // actual only

  bool operator==(const OracleSpec&) const = default;
};

// Transparent iff the model echoes target. Throws TraceError when target is
// not defined from the initial state.
OracleSpec AssignOracle(const EnforcementModel& model,
                        const InputSequence& target);

struct ConcreteTest {
  InputSequence target;
  ActionPath actions;
  OracleSpec oracle;
  std::size_t candidate_rank = 1;  // 1-based

  bool operator==(const ConcreteTest&) const = default;
};

struct ConcretizeOptions {
  std::size_t k = 10;
  MatchMode mode = MatchMode::kSubstring;
};

struct ConcretizeResult {
  std::vector<ConcreteTest> tests;
  std::vector<InputSequence> uncoverable;
  std::vector<std::string> diagnostics;
};

// For each sequence, validates candidates in order by replaying them on the
// bare driver; the first whose alphabet-filtered req trace covers the target
// becomes the test.
ConcretizeResult ConcretizeSuite(const AugmentedGuiModel& gui, AppDriver& driver,
                                 const EnforcementModel& model,
                                 const std::vector<InputSequence>& suite,
                                 const ConcretizeOptions& options = {});

// Replays actions from reset and returns the emitted req events restricted to
// alphabet. Propagates DriverError.
EventList ReplayTrace(AppDriver& driver, const ActionPath& actions,
                      const EventList& alphabet);

std::string ExportTests(const std::vector<ConcreteTest>& tests);
std::vector<ConcreteTest> ImportTests(std::string_view text);

}  // namespace enftest

#endif  // ENFTEST_CONCRETIZER_H_
