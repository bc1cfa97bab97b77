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
#include <functional>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"

namespace enftest {
namespace {

using testing::CameraModel;
using testing::kOpen;
using testing::kPause;
using testing::kRelease;

using SequenceSet = std::set<InputSequence>;

SequenceSet AsSet(const std::vector<InputSequence>& v) {
  return SequenceSet(v.begin(), v.end());
}

EnforcementModel SelfLoopModel() {
  return ParseModel("alphabet: a\nstates: s0\ninitial: s0\ns0 --a--> s0 / a\n");
}

EnforcementModel NoTransitionModel() {
  return ParseModel("alphabet: a\nstates: s0\ninitial: s0\n");
}

// s1 and s2 agree on the first input and differ on the second.
EnforcementModel ThreeStateModel() {
  return ParseModel(
      "alphabet: a, c\nstates: s0, s1, s2\ninitial: s0\n"
      "s0 --a--> s1 / c\n"
      "s1 --a--> s2 / a\n"
      "s2 --a--> s0 / a\n");
}

// Independent oracle: enumerate sequences shorter-first in alphabet order and
// return the first one defined from both states with differing outputs.
std::optional<InputSequence> BruteForceSeparator(const EnforcementModel& m,
                                                 const StateId& a,
                                                 const StateId& b,
                                                 std::size_t max_len) {
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::optional<InputSequence> found;
    InputSequence seq;
    std::function<void()> rec = [&] {
      if (found) return;
      if (seq.size() == len) {
        try {
          if (RunTraceFrom(m, a, seq).outputs != RunTraceFrom(m, b, seq).outputs) {
            found = seq;
          }
        } catch (const TraceError&) {
        }
        return;
      }
      for (const auto& e : m.alphabet()) {
        seq.push_back(e);
        rec();
        seq.pop_back();
        if (found) return;
      }
    };
    rec();
    if (found) return found;
  }
  return std::nullopt;
}

TEST(StateCoverTest, Examples) {
  EXPECT_EQ(StateCover(CameraModel()),
            (std::map<StateId, InputSequence>{{"s0", {}}, {"s1", {kOpen}}}));
  EXPECT_EQ(StateCover(NoTransitionModel()),
            (std::map<StateId, InputSequence>{{"s0", {}}}));
  const auto chain = ParseModel(
      "alphabet: a, b\nstates: s0, s1, s2\ninitial: s0\n"
      "s0 --a--> s1 / a\ns1 --b--> s2 / b\n");
  EXPECT_EQ(StateCover(chain), (std::map<StateId, InputSequence>{
                                   {"s0", {}}, {"s1", {"a"}}, {"s2", {"a", "b"}}}));
}

TEST(StateCoverTest, TiesFollowAlphabetOrder) {
  const auto m = ParseModel(
      "alphabet: z, a\nstates: s0, s1\ninitial: s0\n"
      "s0 --a--> s1 / a\ns0 --z--> s1 / z\n");
  EXPECT_EQ(StateCover(m).at("s1"), InputSequence{"z"});
}

TEST(TransitionCoverTest, Examples) {
  EXPECT_EQ(AsSet(TransitionCover(CameraModel())),
            (SequenceSet{{}, {kPause}, {kOpen}, {kOpen, kRelease}, {kOpen, kPause}}));
  EXPECT_EQ(AsSet(TransitionCover(SelfLoopModel())), (SequenceSet{{}, {"a"}}));
  EXPECT_EQ(AsSet(TransitionCover(NoTransitionModel())), (SequenceSet{{}}));
}

TEST(SeparatingSequenceTest, Examples) {
  EXPECT_EQ(SeparatingSequence(CameraModel(), "s0", "s1"), InputSequence{kPause});
  const auto twins = ParseModel(
      "alphabet: a\nstates: s0, s1\ninitial: s0\n"
      "s0 --a--> s1 / a\ns1 --a--> s0 / a\n");
  EXPECT_FALSE(SeparatingSequence(twins, "s0", "s1"));
  EXPECT_EQ(SeparatingSequence(ThreeStateModel(), "s1", "s2"),
            (InputSequence{"a", "a"}));
  EXPECT_THROW(SeparatingSequence(CameraModel(), "s0", "s0"),
               std::invalid_argument);
}

TEST(SeparatingSequenceTest, MatchesBruteForceOnRandomMachines) {
  constexpr std::size_t kDepth = 6;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto m = testing::RandomMachine(seed, 4, 3);
    for (const auto& a : m.states()) {
      for (const auto& b : m.states()) {
        if (a == b) continue;
        const auto got = SeparatingSequence(m, a, b);
        const auto want = BruteForceSeparator(m, a, b, kDepth);
        if (want) {
          EXPECT_EQ(got, want) << "seed " << seed << " " << a << "/" << b;
        } else if (got) {
          EXPECT_GT(got->size(), kDepth) << "seed " << seed;
        }
      }
    }
  }
}

TEST(SeparatingFamiliesTest, Examples) {
  const auto camera = ComputeSeparatingFamilies(CameraModel());
  EXPECT_EQ(camera.families.at("s0"), std::vector<InputSequence>{{kPause}});
  EXPECT_EQ(camera.families.at("s1"), std::vector<InputSequence>{{kPause}});
  EXPECT_TRUE(camera.indistinguishable.empty());

  const auto single = ComputeSeparatingFamilies(NoTransitionModel());
  EXPECT_TRUE(single.families.at("s0").empty());

  const auto three = ComputeSeparatingFamilies(ThreeStateModel());
  for (const auto& [s, family] : three.families) EXPECT_FALSE(family.empty()) << s;
  for (const auto& [pair, sep] : three.pair_separators) {
    const auto& fa = three.families.at(pair.first);
    const auto& fb = three.families.at(pair.second);
    EXPECT_NE(std::find(fa.begin(), fa.end(), sep), fa.end());
    EXPECT_NE(std::find(fb.begin(), fb.end(), sep), fb.end());
  }
}

TEST(SeparatingFamiliesTest, IndistinguishablePairsAreDiagnosed) {
  const auto twins = ParseModel(
      "alphabet: a\nstates: s0, s1\ninitial: s0\n"
      "s0 --a--> s1 / a\ns1 --a--> s0 / a\n");
  const auto families = ComputeSeparatingFamilies(twins);
  ASSERT_EQ(families.indistinguishable.size(), 1u);
  const auto suite = GenerateHsiSuite(twins);
  EXPECT_EQ(suite.diagnostics.size(), 1u);
  EXPECT_EQ(AsSet(suite.Sequences()), (SequenceSet{{"a", "a"}}));
}

TEST(GenerateHsiSuiteTest, CameraProducesTheFiveSequences) {
  const auto suite = GenerateHsiSuite(CameraModel());
  EXPECT_EQ(AsSet(suite.Sequences()),
            (SequenceSet{{kPause},
                         {kPause, kPause},
                         {kOpen, kPause},
                         {kOpen, kPause, kPause},
                         {kOpen, kRelease, kPause}}));
  for (const auto& e : suite.entries) {
    InputSequence joined = e.prefix;
    joined.insert(joined.end(), e.suffix.begin(), e.suffix.end());
    EXPECT_EQ(joined, e.sequence);
    EXPECT_EQ(e.suffix, InputSequence{kPause});
  }
}

TEST(GenerateHsiSuiteTest, DegenerateModels) {
  EXPECT_EQ(AsSet(GenerateHsiSuite(SelfLoopModel()).Sequences()),
            (SequenceSet{{"a"}}));
  EXPECT_TRUE(GenerateHsiSuite(NoTransitionModel()).entries.empty());
}

TEST(GenerateHsiSuiteTest, PrefixFreeOption) {
  HsiOptions options;
  options.prefix_free = true;
  EXPECT_EQ(AsSet(GenerateHsiSuite(CameraModel(), options).Sequences()),
            (SequenceSet{{kPause, kPause},
                         {kOpen, kPause, kPause},
                         {kOpen, kRelease, kPause}}));
}

TEST(DedupPrefixesTest, Examples) {
  EXPECT_EQ(AsSet(DedupPrefixes({{"a"}, {"a", "b"}})), (SequenceSet{{"a", "b"}}));
  EXPECT_EQ(AsSet(DedupPrefixes({{}, {"a"}})), (SequenceSet{{"a"}}));
  EXPECT_EQ(AsSet(DedupPrefixes({{"a"}, {"a"}, {"b"}})),
            (SequenceSet{{"a"}, {"b"}}));
}

TEST(HsiPropertyTest, RandomMachines) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto m = testing::RandomMachine(seed);
    const auto suite = GenerateHsiSuite(m);
    const auto sequences = suite.Sequences();
    const auto cover = TransitionCover(m);

    // Every transition-cover member is exercised as the prefix of a test.
    for (const auto& p : cover) {
      if (p.empty()) continue;
      EXPECT_TRUE(std::any_of(sequences.begin(), sequences.end(),
                              [&](const auto& s) {
                                return s == p || IsProperPrefix(p, s);
                              }))
          << "seed " << seed;
    }
    // Every sequence is defined from the initial state.
    for (const auto& s : sequences) {
      EXPECT_NO_THROW(RunTrace(m, s)) << "seed " << seed;
    }
    // Separators distinguish their pair.
    const auto families = ComputeSeparatingFamilies(m);
    for (const auto& [pair, sep] : families.pair_separators) {
      EXPECT_NE(RunTraceFrom(m, pair.first, sep).outputs,
                RunTraceFrom(m, pair.second, sep).outputs)
          << "seed " << seed;
    }
    // Deterministic.
    EXPECT_EQ(GenerateHsiSuite(m).entries, suite.entries);

    HsiOptions strict;
    strict.prefix_free = true;
    const auto pf = GenerateHsiSuite(m, strict).Sequences();
    for (const auto& a : pf) {
      for (const auto& b : pf) EXPECT_FALSE(IsProperPrefix(a, b));
    }
  }
}

}  // namespace
}  // namespace enftest
