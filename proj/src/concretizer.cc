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

#include "enftest/concretizer.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "json.hpp"

namespace enftest {

using nlohmann::json;

SequenceMatcher::SequenceMatcher(InputSequence target, MatchMode mode)
    : target_(std::move(target)), mode_(mode), failure_(target_.size() + 1, 0) {
  // failure_[j]: length of the longest proper border of target[0, j).
  for (std::size_t j = 2; j <= target_.size(); ++j) {
    std::size_t b = failure_[j - 1];
    while (b > 0 && target_[b] != target_[j - 1]) b = failure_[b];
    if (target_[b] == target_[j - 1]) ++b;
    failure_[j] = b;
  }
}

std::size_t SequenceMatcher::state_count() const {
  return target_.size() + (mode_ == MatchMode::kWhole ? 2 : 1);
}

std::size_t SequenceMatcher::Advance(std::size_t state,
                                     const EventName& event) const {
  const std::size_t n = target_.size();
  if (mode_ == MatchMode::kWhole) {
    if (state < n && target_[state] == event) return state + 1;
    return n + 1;
  }
  if (state == n) return n;
  std::size_t j = state;
  while (j > 0 && target_[j] != event) j = failure_[j];
  if (target_[j] == event) ++j;
  return j;
}

bool SequenceMatcher::Covers(const EventList& trace) const {
  std::size_t s = start();
  if (mode_ == MatchMode::kSubstring && Accepting(s)) return true;
  for (const auto& e : trace) {
    s = Advance(s, e);
    if (mode_ == MatchMode::kSubstring && Accepting(s)) return true;
  }
  return Accepting(s);
}

namespace {

struct ProductSearch {
  const SequenceMatcher& matcher;
  // Outgoing edges per node, sorted by action encoding.
  std::map<std::string, std::vector<std::pair<std::string, const GuiEdge*>>> out;
  std::size_t k;
  std::vector<ActionPath>& found;
  std::set<std::pair<std::string, std::size_t>> on_path;
  ActionPath path;

  std::size_t Run(const EventList& annotation, std::size_t state) const {
    for (const auto& e : annotation) state = matcher.Advance(state, e);
    return state;
  }

  // Emits every path of exactly `remaining` further edges that first accepts
  // on its last edge.
  void Search(const std::string& node, std::size_t state, std::size_t remaining) {
    if (found.size() >= k) return;
    if (remaining == 0) return;
    const auto it = out.find(node);
    if (it == out.end()) return;
    for (const auto& [encoding, edge] : it->second) {
      const std::size_t next = Run(edge->annotation, state);
      if (!on_path.insert({edge->to, next}).second) continue;
      path.push_back(edge->action);
      if (matcher.Accepting(next)) {
        if (remaining == 1) found.push_back(path);
      } else {
        Search(edge->to, next, remaining - 1);
      }
      path.pop_back();
      on_path.erase({edge->to, next});
      if (found.size() >= k) return;
    }
  }
};

}  // namespace

std::vector<ActionPath> KShortestCoveringPaths(const AugmentedGuiModel& gui,
                                               const InputSequence& target,
                                               std::size_t k, MatchMode mode) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  std::vector<ActionPath> found;
  const SequenceMatcher matcher(target, mode);
  if (matcher.Accepting(matcher.start())) {
    found.push_back({});
    return found;
  }
  ProductSearch search{matcher, {}, k, found, {}, {}};
  for (const auto& e : gui.edges) {
    search.out[e.from].emplace_back(EncodeAction(e.action), &e);
  }
  for (auto& [node, edges] : search.out) {
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  // Product-simple paths are bounded by the product size.
  const std::size_t max_len = gui.nodes.size() * matcher.state_count();
  for (std::size_t len = 1; len <= max_len && found.size() < k; ++len) {
    search.on_path = {{gui.initial, matcher.start()}};
    search.Search(gui.initial, matcher.start(), len);
  }
  return found;
}

OracleSpec AssignOracle(const EnforcementModel& model,
                        const InputSequence& target) {
  const TraceRun run = RunTrace(model, target);
  OracleSpec oracle;
  if (!run.divergence) return oracle;
  oracle.kind = OracleKind::kActual;
  oracle.divergence_index = run.divergence;
  oracle.expected_api_outputs = run.outputs;
  return oracle;
}

EventList ReplayTrace(AppDriver& driver, const ActionPath& actions,
                      const EventList& alphabet) {
  driver.Reset();
  EventList trace;
  for (const auto& a : actions) {
    const auto r = driver.Perform(a);
    for (const auto& e : FilterToAlphabet(r.emitted, alphabet)) {
      trace.push_back(e);
    }
  }
  return trace;
}

ConcretizeResult ConcretizeSuite(const AugmentedGuiModel& gui, AppDriver& driver,
                                 const EnforcementModel& model,
                                 const std::vector<InputSequence>& suite,
                                 const ConcretizeOptions& options) {
  ConcretizeResult result;
  for (const auto& target : suite) {
    const SequenceMatcher matcher(target, options.mode);
    const auto candidates =
        KShortestCoveringPaths(gui, target, options.k, options.mode);
    bool covered = false;
    for (std::size_t rank = 0; rank < candidates.size() && !covered; ++rank) {
      EventList trace;
      try {
        trace = ReplayTrace(driver, candidates[rank], model.alphabet());
      } catch (const DriverError& e) {
        result.diagnostics.push_back("[" + JoinEvents(target, " ") +
                                     "] candidate " + std::to_string(rank + 1) +
                                     ": " + e.what());
        continue;
      }
      if (!matcher.Covers(trace)) continue;
      result.tests.push_back(
          {target, candidates[rank], AssignOracle(model, target), rank + 1});
      covered = true;
    }
    if (!covered) result.uncoverable.push_back(target);
  }
  return result;
}

namespace {

json OracleToJson(const OracleSpec& o) {
  json j = {{"kind", o.kind == OracleKind::kActual ? "actual" : "transparent"}};
  if (o.kind == OracleKind::kActual) {
    j["divergence_index"] = *o.divergence_index;
    j["expected_api_outputs"] = o.expected_api_outputs;
  }
  return j;
}

OracleSpec OracleFromJson(const json& j) {
  OracleSpec o;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "transparent") return o;
  if (kind != "actual") throw std::invalid_argument("unknown oracle kind");
  o.kind = OracleKind::kActual;
  o.divergence_index = j.at("divergence_index").get<std::size_t>();
  o.expected_api_outputs = j.at("expected_api_outputs").get<EventList>();
  return o;
}

}  // namespace

std::string ExportTests(const std::vector<ConcreteTest>& tests) {
  json doc = json::array();
  for (const auto& t : tests) {
    json actions = json::array();
    for (const auto& a : t.actions) actions.push_back(EncodeAction(a));
    doc.push_back({{"target", t.target},
                   {"actions", actions},
                   {"oracle", OracleToJson(t.oracle)},
                   {"candidate_rank", t.candidate_rank}});
  }
  return doc.dump(2) + "\n";
}

std::vector<ConcreteTest> ImportTests(std::string_view text) {
  std::vector<ConcreteTest> tests;
  try {
    const json doc = json::parse(text);
    if (!doc.is_array()) throw std::runtime_error("test suite must be an array");
    for (const auto& j : doc) {
      ConcreteTest t;
      t.target = j.at("target").get<InputSequence>();
      for (const auto& a : j.at("actions")) {
        t.actions.push_back(DecodeAction(a.get<std::string>()));
      }
      t.oracle = OracleFromJson(j.at("oracle"));
      t.candidate_rank = j.at("candidate_rank").get<std::size_t>();
      tests.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed test suite: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed test suite: ") + e.what());
  }
  return tests;
}

}  // namespace enftest
