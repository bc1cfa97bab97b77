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

#include "enftest/model.h"

#include <algorithm>
#include <cctype>
#include <deque>
#include <regex>
#include <sstream>

namespace enftest {

namespace {

std::string Trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

bool ValidIdentifier(std::string_view id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char c) {
    return c == ',' || c == '/' || c == '#' ||
           std::isspace(static_cast<unsigned char>(c));
  });
}

std::vector<std::string> SplitList(std::string_view s, std::size_t line) {
  std::vector<std::string> out;
  const std::string body = Trim(s);
  if (body.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    auto item = Trim(std::string_view(body).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!ValidIdentifier(item)) {
      throw ModelError("malformed identifier list '" + body + "'", line);
    }
    out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct RawEdge {
  StateId from;
  EventName input;
  StateId to;
  std::optional<EventList> outputs;
  std::size_t line = 0;
};

// Shared by model and monitor files; the two differ only in the `violating:`
// header and in whether edges carry an output list.
struct RawAutomaton {
  std::optional<EventList> alphabet;
  std::optional<std::vector<StateId>> states;
  std::optional<StateId> initial;
  std::optional<std::vector<StateId>> violating;
  std::vector<RawEdge> edges;
};

RawAutomaton ParseRaw(std::string_view text) {
  static const std::regex kEdge(
      R"(^(\S+)\s+--(\S+?)-->\s+(\S+)\s*(/(.*))?$)");
  RawAutomaton raw;
  std::istringstream in{std::string(text)};
  std::string line_text;
  std::size_t line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    if (const auto hash = line_text.find('#'); hash != std::string::npos) {
      line_text.erase(hash);
    }
    const std::string l = Trim(line_text);
    if (l.empty()) continue;

    auto header = [&](std::string_view key) -> std::optional<std::string> {
      if (l.rfind(key, 0) == 0 && l.size() > key.size() && l[key.size()] == ':') {
        return l.substr(key.size() + 1);
      }
      return std::nullopt;
    };
    auto once = [&](auto& slot, std::string_view key) {
      if (slot.has_value()) {
        throw ModelError("duplicate '" + std::string(key) + ":' header", line);
      }
    };

    if (auto v = header("alphabet")) {
      once(raw.alphabet, "alphabet");
      raw.alphabet = SplitList(*v, line);
    } else if (auto v = header("states")) {
      once(raw.states, "states");
      raw.states = SplitList(*v, line);
    } else if (auto v = header("initial")) {
      once(raw.initial, "initial");
      auto id = Trim(*v);
      if (!ValidIdentifier(id)) throw ModelError("malformed initial state", line);
      raw.initial = id;
    } else if (auto v = header("violating")) {
      once(raw.violating, "violating");
      raw.violating = SplitList(*v, line);
    } else {
      std::smatch m;
      if (!std::regex_match(l, m, kEdge)) {
        throw ModelError("syntax error: expected header or 'src --event--> dst'",
                         line);
      }
      RawEdge e{m[1], m[2], m[3], std::nullopt, line};
      if (m[4].matched) e.outputs = SplitList(m[5].str(), line);
      raw.edges.push_back(std::move(e));
    }
  }
  if (!raw.alphabet) throw ModelError("missing 'alphabet:' header");
  if (!raw.states) throw ModelError("missing 'states:' header");
  if (!raw.initial) throw ModelError("missing 'initial:' header");
  return raw;
}

void CheckUnique(const std::vector<std::string>& items, const char* what) {
  std::set<std::string> seen;
  for (const auto& i : items) {
    if (!seen.insert(i).second) {
      throw ModelError(std::string("duplicate ") + what + " '" + i + "'");
    }
  }
}

template <typename T>
bool Contains(const std::vector<T>& v, std::string_view x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

EnforcementModel EnforcementModel::Build(
    EventList alphabet, std::vector<StateId> states, StateId initial,
    std::vector<std::pair<TransitionKey, Transition>> transitions) {
  CheckUnique(alphabet, "event");
  CheckUnique(states, "state");
  if (states.empty()) throw ModelError("model declares no states");
  if (!Contains(states, initial)) {
    throw ModelError("initial state '" + initial + "' is not declared");
  }
  EnforcementModel m;
  for (auto& [key, t] : transitions) {
    if (!Contains(states, key.first)) {
      throw ModelError("unknown state '" + key.first + "'");
    }
    if (!Contains(states, t.next)) {
      throw ModelError("unknown state '" + t.next + "'");
    }
    if (!Contains(alphabet, key.second)) {
      throw ModelError("unknown event '" + key.second + "'");
    }
    for (const auto& o : t.outputs) {
      if (!Contains(alphabet, o)) throw ModelError("unknown event '" + o + "'");
    }
    if (!m.transitions_.emplace(key, t).second) {
      throw ModelError("nondeterministic transitions from (" + key.first +
                       ", " + key.second + ")");
    }
  }

  std::set<StateId> reached{initial};
  std::deque<StateId> frontier{initial};
  while (!frontier.empty()) {
    const StateId s = frontier.front();
    frontier.pop_front();
    for (const auto& [key, t] : m.transitions_) {
      if (key.first == s && reached.insert(t.next).second) {
        frontier.push_back(t.next);
      }
    }
  }
  for (const auto& s : states) {
    if (!reached.count(s)) throw ModelError("unreachable state '" + s + "'");
  }

  m.alphabet_ = std::move(alphabet);
  m.states_ = std::move(states);
  m.initial_ = std::move(initial);
  return m;
}

bool EnforcementModel::HasState(std::string_view state) const {
  return Contains(states_, state);
}

bool EnforcementModel::InAlphabet(std::string_view event) const {
  return Contains(alphabet_, event);
}

std::size_t EnforcementModel::AlphabetIndex(std::string_view event) const {
  const auto it = std::find(alphabet_.begin(), alphabet_.end(), event);
  if (it == alphabet_.end()) {
    throw std::invalid_argument("event '" + std::string(event) +
                                "' is not in the alphabet");
  }
  return static_cast<std::size_t>(it - alphabet_.begin());
}

std::optional<Transition> EnforcementModel::Step(const StateId& state,
                                                 const EventName& input) const {
  if (!HasState(state)) {
    throw std::invalid_argument("unknown state '" + state + "'");
  }
  if (!InAlphabet(input)) {
    throw std::invalid_argument("event '" + input + "' is not in the alphabet");
  }
  const auto it = transitions_.find({state, input});
  if (it == transitions_.end()) return std::nullopt;
  return it->second;
}

EnforcementModel ParseModel(std::string_view text) {
  RawAutomaton raw = ParseRaw(text);
  if (raw.violating) {
    throw ModelError("'violating:' is only valid in policy monitor files");
  }
  std::set<std::pair<StateId, EventName>> seen;
  std::vector<std::pair<EnforcementModel::TransitionKey, Transition>> edges;
  for (auto& e : raw.edges) {
    if (!e.outputs) {
      throw ModelError("transition is missing its '/ outputs' list", e.line);
    }
    if (!Contains(*raw.states, e.from)) {
      throw ModelError("unknown state '" + e.from + "'", e.line);
    }
    if (!Contains(*raw.states, e.to)) {
      throw ModelError("unknown state '" + e.to + "'", e.line);
    }
    if (!Contains(*raw.alphabet, e.input)) {
      throw ModelError("unknown event '" + e.input + "'", e.line);
    }
    for (const auto& o : *e.outputs) {
      if (!Contains(*raw.alphabet, o)) {
        throw ModelError("unknown event '" + o + "'", e.line);
      }
    }
    if (!seen.insert({e.from, e.input}).second) {
      throw ModelError("nondeterministic transitions from (" + e.from + ", " +
                           e.input + ")",
                       e.line);
    }
    edges.push_back({{e.from, e.input}, Transition{*e.outputs, e.to}});
  }
  return EnforcementModel::Build(std::move(*raw.alphabet),
                                 std::move(*raw.states), std::move(*raw.initial),
                                 std::move(edges));
}

std::string JoinEvents(const EventList& events, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) out += sep;
    out += events[i];
  }
  return out;
}

std::string SerializeModel(const EnforcementModel& model) {
  std::ostringstream out;
  out << "alphabet: " << JoinEvents(model.alphabet()) << "\n";
  out << "states: " << JoinEvents(model.states()) << "\n";
  out << "initial: " << model.initial() << "\n";
  for (const auto& [key, t] : model.transitions()) {
    out << key.first << " --" << key.second << "--> " << t.next << " /";
    if (!t.outputs.empty()) out << " " << JoinEvents(t.outputs);
    out << "\n";
  }
  return out.str();
}

TraceRun RunTraceFrom(const EnforcementModel& model, const StateId& start,
                      const EventList& inputs) {
  TraceRun run;
  run.final_state = start;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto t = model.Step(run.final_state, inputs[i]);
    if (!t) throw TraceError(i, run.final_state, inputs[i]);
    if (!run.divergence &&
        !(t->outputs.size() == 1 && t->outputs.front() == inputs[i])) {
      run.divergence = i;
    }
    run.outputs.insert(run.outputs.end(), t->outputs.begin(), t->outputs.end());
    run.final_state = t->next;
  }
  return run;
}

TraceRun RunTrace(const EnforcementModel& model, const EventList& inputs) {
  return RunTraceFrom(model, model.initial(), inputs);
}

PolicyMonitor PolicyMonitor::Build(
    EventList alphabet, std::vector<StateId> states, StateId initial,
    std::set<StateId> violating,
    std::vector<std::pair<std::pair<StateId, EventName>, StateId>> steps) {
  CheckUnique(alphabet, "event");
  CheckUnique(states, "state");
  if (!Contains(states, initial)) {
    throw ModelError("initial state '" + initial + "' is not declared");
  }
  for (const auto& v : violating) {
    if (!Contains(states, v)) throw ModelError("unknown state '" + v + "'");
  }
  PolicyMonitor p;
  for (auto& [key, next] : steps) {
    if (!Contains(states, key.first) || !Contains(states, next)) {
      throw ModelError("unknown state in step from '" + key.first + "'");
    }
    if (!Contains(alphabet, key.second)) {
      throw ModelError("unknown event '" + key.second + "'");
    }
    if (violating.count(key.first) && !violating.count(next)) {
      throw ModelError("violating state '" + key.first +
                       "' must be absorbing");
    }
    if (!p.step_.emplace(key, next).second) {
      throw ModelError("nondeterministic steps from (" + key.first + ", " +
                       key.second + ")");
    }
  }
  // Violating states may leave steps implicit; they self-loop.
  for (const auto& s : states) {
    for (const auto& a : alphabet) {
      if (p.step_.count({s, a})) continue;
      if (!violating.count(s)) {
        throw ModelError("monitor step is not total: (" + s + ", " + a +
                         ") undefined");
      }
      p.step_[{s, a}] = s;
    }
  }
  p.alphabet_ = std::move(alphabet);
  p.states_ = std::move(states);
  p.initial_ = std::move(initial);
  p.violating_ = std::move(violating);
  return p;
}

bool PolicyMonitor::InAlphabet(std::string_view event) const {
  return Contains(alphabet_, event);
}

StateId PolicyMonitor::Step(const StateId& state, const EventName& event) const {
  const auto it = step_.find({state, event});
  if (it == step_.end()) {
    throw std::invalid_argument("monitor has no step for (" + state + ", " +
                                event + ")");
  }
  return it->second;
}

PolicyMonitor ParsePolicyMonitor(std::string_view text) {
  RawAutomaton raw = ParseRaw(text);
  std::vector<std::pair<std::pair<StateId, EventName>, StateId>> steps;
  for (auto& e : raw.edges) {
    if (e.outputs) {
      throw ModelError("monitor transitions carry no output list", e.line);
    }
    steps.push_back({{e.from, e.input}, e.to});
  }
  std::set<StateId> violating;
  if (raw.violating) violating.insert(raw.violating->begin(), raw.violating->end());
  return PolicyMonitor::Build(std::move(*raw.alphabet), std::move(*raw.states),
                              std::move(*raw.initial), std::move(violating),
                              std::move(steps));
}

PolicyVerdict CheckPolicy(const PolicyMonitor& monitor, const EventList& trace) {
  for (const auto& e : trace) {
    if (!monitor.InAlphabet(e)) {
      throw std::invalid_argument("event '" + e +
                                  "' is not in the monitor alphabet");
    }
  }
  StateId s = monitor.initial();
  if (monitor.violating().count(s)) return Violated{0};
  for (std::size_t i = 0; i < trace.size(); ++i) {
    s = monitor.Step(s, trace[i]);
    if (monitor.violating().count(s)) return Violated{i};
  }
  return Satisfied{};
}

EventList FilterToAlphabet(const EventList& events, const EventList& alphabet) {
  EventList out;
  for (const auto& e : events) {
    if (Contains(alphabet, e)) out.push_back(e);
  }
  return out;
}

}  // namespace enftest
