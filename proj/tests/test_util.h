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

#ifndef ENFTEST_TESTS_TEST_UTIL_H_
#define ENFTEST_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "enftest/app_sim.h"
#include "enftest/json_io.h"
#include "enftest/model.h"

namespace enftest::testing {

inline std::filesystem::path Fixture(const std::string& name) {
  return std::filesystem::path(ENFTEST_FIXTURE_DIR) / name;
}

inline EnforcementModel CameraModel() {
  return ParseModel(ReadFile(Fixture("camera.model")));
}

inline PolicyMonitor CameraPolicy() {
  return ParsePolicyMonitor(ReadFile(Fixture("camera.policy")));
}

inline std::shared_ptr<const AppSpec> LoadFixtureApp(const std::string& name) {
  return std::make_shared<const AppSpec>(LoadAppSpec(ReadFile(Fixture(name))));
}

inline std::shared_ptr<const AppSpec> CompliantApp() {
  return LoadFixtureApp("foocam-mini-compliant.json");
}

inline std::shared_ptr<const AppSpec> LeakyApp() {
  return LoadFixtureApp("foocam-mini-leaky.json");
}

// Short names used throughout the tests.
inline const EventName kOpen = "camera.open";
inline const EventName kRelease = "camera.release";
inline const EventName kPause = "activity.onPause";

// Random deterministic partial machine with every state reachable: a random
// spanning tree first, then extra random transitions. Outputs are 0-2 random
// alphabet events.
inline EnforcementModel RandomMachine(std::uint64_t seed,
                                      std::size_t max_states = 6,
                                      std::size_t max_inputs = 4) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t n = pick(1, max_states);
  const std::size_t m = pick(1, max_inputs);
  EventList alphabet;
  for (std::size_t i = 0; i < m; ++i) alphabet.push_back("e" + std::to_string(i));
  std::vector<StateId> states;
  for (std::size_t i = 0; i < n; ++i) states.push_back("q" + std::to_string(i));

  std::map<std::pair<StateId, EventName>, Transition> edges;
  auto random_output = [&] {
    EventList out;
    const std::size_t len = pick(0, 2);
    for (std::size_t i = 0; i < len; ++i) out.push_back(alphabet[pick(0, m - 1)]);
    return out;
  };
  for (std::size_t i = 1; i < n; ++i) {
    // Attach state i under a free (earlier state, input) slot; i * m >= i
    // slots exist and only i - 1 are taken.
    std::vector<std::pair<StateId, EventName>> free_slots;
    for (std::size_t p = 0; p < i; ++p) {
      for (const auto& a : alphabet) {
        if (!edges.count({states[p], a})) free_slots.emplace_back(states[p], a);
      }
    }
    edges[free_slots[pick(0, free_slots.size() - 1)]] = {random_output(),
                                                          states[i]};
  }
  const std::size_t extra = pick(0, n * alphabet.size());
  for (std::size_t i = 0; i < extra; ++i) {
    const auto from = states[pick(0, n - 1)];
    const auto input = alphabet[pick(0, alphabet.size() - 1)];
    if (edges.count({from, input})) continue;
    edges[{from, input}] = {random_output(), states[pick(0, n - 1)]};
  }
  std::vector<std::pair<EnforcementModel::TransitionKey, Transition>> list(
      edges.begin(), edges.end());
  return EnforcementModel::Build(alphabet, states, states[0], list);
}

}  // namespace enftest::testing

#endif  // ENFTEST_TESTS_TEST_UTIL_H_
