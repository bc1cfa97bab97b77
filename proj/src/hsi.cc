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

#include "enftest/hsi.h"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace enftest {

bool SequenceOrder::operator()(const InputSequence& a,
                               const InputSequence& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ia = model_->AlphabetIndex(a[i]);
    const auto ib = model_->AlphabetIndex(b[i]);
    if (ia != ib) return ia < ib;
  }
  return false;
}

std::map<StateId, InputSequence> StateCover(const EnforcementModel& model) {
  std::map<StateId, InputSequence> access{{model.initial(), {}}};
  std::deque<StateId> frontier{model.initial()};
  while (!frontier.empty()) {
    const StateId s = frontier.front();
    frontier.pop_front();
    for (const auto& a : model.alphabet()) {
      const auto t = model.Step(s, a);
      if (!t || access.count(t->next)) continue;
      auto seq = access[s];
      seq.push_back(a);
      access.emplace(t->next, std::move(seq));
      frontier.push_back(t->next);
    }
  }
  return access;
}

std::vector<InputSequence> TransitionCover(const EnforcementModel& model) {
  const auto access = StateCover(model);
  std::vector<InputSequence> cover{{}};
  for (const auto& [key, t] : model.transitions()) {
    auto seq = access.at(key.first);
    seq.push_back(key.second);
    cover.push_back(std::move(seq));
  }
  std::sort(cover.begin(), cover.end(), SequenceOrder(model));
  cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
  return cover;
}

std::optional<InputSequence> SeparatingSequence(const EnforcementModel& model,
                                                const StateId& si,
                                                const StateId& sj) {
  if (si == sj) {
    throw std::invalid_argument("separating sequence needs two distinct states");
  }
  if (!model.HasState(si) || !model.HasState(sj)) {
    throw std::invalid_argument("unknown state");
  }
  // Breadth-first search over state pairs. Every queued pair was reached by a
  // sequence on which both states produced identical outputs so far, so the
  // concatenated traces first differ exactly where a single step's outputs do.
  struct Node {
    StateId a, b;
    InputSequence path;
  };
  const std::size_t bound = model.states().size() * model.states().size();
  std::set<std::pair<StateId, StateId>> seen{{si, sj}};
  std::deque<Node> frontier{{si, sj, {}}};
  while (!frontier.empty()) {
    Node n = std::move(frontier.front());
    frontier.pop_front();
    if (n.path.size() >= bound) continue;
    for (const auto& input : model.alphabet()) {
      const auto ta = model.Step(n.a, input);
      const auto tb = model.Step(n.b, input);
      if (!ta || !tb) continue;
      auto path = n.path;
      path.push_back(input);
      if (ta->outputs != tb->outputs) return path;
      if (seen.insert({ta->next, tb->next}).second) {
        frontier.push_back({ta->next, tb->next, std::move(path)});
      }
    }
  }
  return std::nullopt;
}

SeparatingFamilies ComputeSeparatingFamilies(const EnforcementModel& model) {
  SeparatingFamilies result;
  const auto& states = model.states();
  for (const auto& s : states) result.families[s];
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const auto sep = SeparatingSequence(model, states[i], states[j]);
      if (!sep) {
        result.indistinguishable.emplace_back(states[i], states[j]);
        continue;
      }
      result.pair_separators[{states[i], states[j]}] = *sep;
      for (const auto* s : {&states[i], &states[j]}) {
        auto& family = result.families[*s];
        if (std::find(family.begin(), family.end(), *sep) == family.end()) {
          family.push_back(*sep);
        }
      }
    }
  }
  const SequenceOrder order(model);
  for (auto& [s, family] : result.families) {
    std::sort(family.begin(), family.end(), order);
  }
  return result;
}

bool IsProperPrefix(const InputSequence& prefix, const InputSequence& of) {
  return prefix.size() < of.size() &&
         std::equal(prefix.begin(), prefix.end(), of.begin());
}

std::vector<InputSequence> HsiSuite::Sequences() const {
  std::vector<InputSequence> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.sequence);
  return out;
}

namespace {

bool IsPrefixOfAny(const InputSequence& seq,
                   const std::vector<SuiteEntry>& entries) {
  return std::any_of(entries.begin(), entries.end(), [&](const SuiteEntry& e) {
    return IsProperPrefix(seq, e.sequence);
  });
}

}  // namespace

HsiSuite GenerateHsiSuite(const EnforcementModel& model,
                          const HsiOptions& options) {
  HsiSuite suite;
  const auto families = ComputeSeparatingFamilies(model);
  for (const auto& [a, b] : families.indistinguishable) {
    suite.diagnostics.push_back("states " + a + " and " + b +
                                " are not distinguishable");
  }

  std::vector<SuiteEntry> candidates;
  for (const auto& p : TransitionCover(model)) {
    const StateId reached = RunTrace(model, p).final_state;
    bool emitted = false;
    for (const auto& h : families.families.at(reached)) {
      try {
        RunTraceFrom(model, reached, h);
      } catch (const TraceError&) {
        continue;
      }
      auto seq = p;
      seq.insert(seq.end(), h.begin(), h.end());
      candidates.push_back({std::move(seq), p, h});
      emitted = true;
    }
    if (!emitted) candidates.push_back({p, p, {}});
  }

  // Redundant combinations: repeated sequences, the empty sequence, and bare
  // cover members already exercised as the prefix of a longer test.
  std::vector<SuiteEntry> unique;
  for (auto& c : candidates) {
    if (c.sequence.empty()) continue;
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const auto& u) {
      return u.sequence == c.sequence;
    });
    if (!dup) unique.push_back(std::move(c));
  }
  for (const auto& u : unique) {
    if (u.suffix.empty() && IsPrefixOfAny(u.sequence, unique)) continue;
    if (options.prefix_free && IsPrefixOfAny(u.sequence, unique)) continue;
    suite.entries.push_back(u);
  }

  const SequenceOrder order(model);
  std::sort(suite.entries.begin(), suite.entries.end(),
            [&](const SuiteEntry& x, const SuiteEntry& y) {
              return order(x.sequence, y.sequence);
            });
  return suite;
}

std::vector<InputSequence> DedupPrefixes(std::vector<InputSequence> sequences) {
  std::sort(sequences.begin(), sequences.end());
  sequences.erase(std::unique(sequences.begin(), sequences.end()),
                  sequences.end());
  std::vector<InputSequence> out;
  for (const auto& s : sequences) {
    const bool covered =
        std::any_of(sequences.begin(), sequences.end(),
                    [&](const InputSequence& o) { return IsProperPrefix(s, o); });
    if (!covered) out.push_back(s);
  }
  return out;
}

}  // namespace enftest
