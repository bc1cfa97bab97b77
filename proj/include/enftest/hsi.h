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

#ifndef ENFTEST_HSI_H_
#define ENFTEST_HSI_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enftest/model.h"

namespace enftest {

// Possibly empty; the empty sequence plays the role of epsilon.
using InputSequence = EventList;

// Orders sequences shorter-first, then lexicographically by alphabet
// declaration index.
class SequenceOrder {
 public:
  explicit SequenceOrder(const EnforcementModel& model) : model_(&model) {}
  bool operator()(const InputSequence& a, const InputSequence& b) const;

 private:
  const EnforcementModel* model_;
};

std::map<StateId, InputSequence> StateCover(const EnforcementModel& model);

// {epsilon} plus access(s).a for every defined transition (s, a), sorted by
// SequenceOrder.
std::vector<InputSequence> TransitionCover(const EnforcementModel& model);

// Shortest sequence defined from both states whose output traces differ.
// Throws std::invalid_argument when si == sj.
std::optional<InputSequence> SeparatingSequence(const EnforcementModel& model,
                                                const StateId& si,
                                                const StateId& sj);

struct SeparatingFamilies {
  std::map<StateId, std::vector<InputSequence>> families;
  // The separator chosen for each distinguishable pair (first < second in
  // declaration order). It is present in both endpoint families.
  std::map<std::pair<StateId, StateId>, InputSequence> pair_separators;
  std::vector<std::pair<StateId, StateId>> indistinguishable;
};

SeparatingFamilies ComputeSeparatingFamilies(const EnforcementModel& model);

struct SuiteEntry {
  InputSequence sequence;
  InputSequence prefix;  // transition-cover member
  InputSequence suffix;  // separating sequence, empty when none applied

  bool operator==(const SuiteEntry&) const = default;
};

struct HsiSuite {
  std::vector<SuiteEntry> entries;  // sorted by SequenceOrder
  std::vector<std::string> diagnostics;

  std::vector<InputSequence> Sequences() const;
};

struct HsiOptions {
  // Additionally drop every sequence that is a proper prefix of another one.
  bool prefix_free = false;
};

HsiSuite GenerateHsiSuite(const EnforcementModel& model,
                          const HsiOptions& options = {});

// Removes every member that is a proper prefix of another member. Result is
// sorted lexicographically and free of duplicates.
std::vector<InputSequence> DedupPrefixes(std::vector<InputSequence> sequences);

bool IsProperPrefix(const InputSequence& prefix, const InputSequence& of);

}  // namespace enftest

#endif  // ENFTEST_HSI_H_
