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

#ifndef ENFTEST_MODEL_H_
#define ENFTEST_MODEL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace enftest {

using EventName = std::string;
using StateId = std::string;
using EventList = std::vector<EventName>;

enum class EventKind { kReq, kApi };

struct Event {
  EventName name;
  EventKind kind = EventKind::kReq;
};

// Raised for malformed model text. line is 1-based; 0 when the problem is not
// tied to a single line (e.g. an unreachable state).
class ModelError : public std::runtime_error {
 public:
  ModelError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " +
                                           what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A defined input sequence hit an undefined transition.
class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t index, StateId state, EventName input)
      : std::runtime_error("undefined transition at index " +
                           std::to_string(index) + " (state " + state +
                           ", input " + input + ")"),
        index_(index),
        state_(std::move(state)),
        input_(std::move(input)) {}
  std::size_t index() const { return index_; }
  const StateId& state() const { return state_; }
  const EventName& input() const { return input_; }

 private:
  std::size_t index_;
  StateId state_;
  EventName input_;
};

struct Transition {
  EventList outputs;
  StateId next;

  bool operator==(const Transition&) const = default;
};

// Deterministic, possibly partial input/output automaton. Inputs are
// intercepted (req) events, outputs are emitted (api) events. Immutable once
// built; construct through ParseModel or EnforcementModel::Build.
class EnforcementModel {
 public:
  using TransitionKey = std::pair<StateId, EventName>;

  // Validates and builds. Throws ModelError on any invariant violation.
  static EnforcementModel Build(EventList alphabet, std::vector<StateId> states,
                                StateId initial,
                                std::vector<std::pair<TransitionKey, Transition>>
                                    transitions);

  const EventList& alphabet() const { return alphabet_; }
  const std::vector<StateId>& states() const { return states_; }
  const StateId& initial() const { return initial_; }
  const std::map<TransitionKey, Transition>& transitions() const {
    return transitions_;
  }

  bool HasState(std::string_view state) const;
  bool InAlphabet(std::string_view event) const;
  // Position of event in the declared alphabet; declared order is the
  // tie-break order for every downstream enumeration.
  std::size_t AlphabetIndex(std::string_view event) const;

  // Throws std::invalid_argument for an unknown state or a non-alphabet input.
  std::optional<Transition> Step(const StateId& state,
                                 const EventName& input) const;

  bool operator==(const EnforcementModel&) const = default;

 private:
  EventList alphabet_;
  std::vector<StateId> states_;
  StateId initial_;
  std::map<TransitionKey, Transition> transitions_;
};

struct TraceRun {
  EventList outputs;
  StateId final_state;
  // First input whose output differs from the echoed input.
  std::optional<std::size_t> divergence;
};

EnforcementModel ParseModel(std::string_view text);
std::string SerializeModel(const EnforcementModel& model);

// Folds Step over inputs starting from the initial state. Throws TraceError on
// an undefined transition and std::invalid_argument on non-alphabet input.
TraceRun RunTrace(const EnforcementModel& model, const EventList& inputs);
TraceRun RunTraceFrom(const EnforcementModel& model, const StateId& start,
                      const EventList& inputs);

// Finite-trace safety monitor. Violating states are absorbing.
class PolicyMonitor {
 public:
  static PolicyMonitor Build(
      EventList alphabet, std::vector<StateId> states, StateId initial,
      std::set<StateId> violating,
      std::vector<std::pair<std::pair<StateId, EventName>, StateId>> steps);

  const EventList& alphabet() const { return alphabet_; }
  const std::vector<StateId>& states() const { return states_; }
  const StateId& initial() const { return initial_; }
  const std::set<StateId>& violating() const { return violating_; }

  StateId Step(const StateId& state, const EventName& event) const;
  bool InAlphabet(std::string_view event) const;

 private:
  EventList alphabet_;
  std::vector<StateId> states_;
  StateId initial_;
  std::set<StateId> violating_;
  std::map<std::pair<StateId, EventName>, StateId> step_;
};

struct Satisfied {
  bool operator==(const Satisfied&) const = default;
};
struct Violated {
  std::size_t at = 0;
  bool operator==(const Violated&) const = default;
};
using PolicyVerdict = std::variant<Satisfied, Violated>;

PolicyMonitor ParsePolicyMonitor(std::string_view text);

// Throws std::invalid_argument for events outside the monitor alphabet.
PolicyVerdict CheckPolicy(const PolicyMonitor& monitor, const EventList& trace);

// Keeps only events in alphabet, preserving order.
EventList FilterToAlphabet(const EventList& events, const EventList& alphabet);

std::string JoinEvents(const EventList& events, std::string_view sep = ", ");

}  // namespace enftest

#endif  // ENFTEST_MODEL_H_
