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

#ifndef ENFTEST_APP_SIM_H_
#define ENFTEST_APP_SIM_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "enftest/model.h"

namespace enftest {

using PropertyValue = std::variant<std::string, bool, std::int64_t>;

struct View {
  std::string id;
  std::map<std::string, PropertyValue> properties;

  bool Flag(const std::string& key) const;
  bool operator==(const View&) const = default;
};

// Hex digest over the sorted (view id, key, value) triples. Keys listed in
// ignore_keys do not contribute.
std::string ComputeSignature(const std::vector<View>& views,
                             const std::set<std::string>& ignore_keys = {});

struct GuiState {
  std::vector<View> views;  // sorted by id
  std::string signature;

  static GuiState FromViews(std::vector<View> views,
                            const std::set<std::string>& ignore_keys = {});
};

enum class ActionKind { kTouch, kLongTouch, kSetText, kKeyEvent, kScroll };
enum class ScrollDirection { kUp, kDown, kLeft, kRight };

inline constexpr std::string_view kDefaultInputText = "enftest";

struct UiAction {
  ActionKind kind = ActionKind::kTouch;
  std::optional<std::string> target;
  std::string text;  // setText
  std::string key;   // keyEvent
  ScrollDirection direction = ScrollDirection::kDown;

  static UiAction Touch(std::string target);
  static UiAction LongTouch(std::string target);
  static UiAction SetText(std::string target,
                          std::string text = std::string(kDefaultInputText));
  static UiAction KeyEvent(std::string key);
  static UiAction Scroll(ScrollDirection direction);

  bool operator==(const UiAction&) const = default;
};

// Canonical textual form, e.g. "touch(Allow)", "keyEvent(Back)",
// "setText(name=enftest)", "scroll(down)". Paths are ordered by comparing
// these encodings.
std::string EncodeAction(const UiAction& action);
UiAction DecodeAction(std::string_view text);

struct CostVector {
  double cpu_ms = 0;
  double alloc_kb = 0;
  double free_kb = 0;
  double energy_units = 0;

  bool operator==(const CostVector&) const = default;
};

class AppSpecError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by a driver when asked to do something its contract forbids at
// runtime, e.g. performing an action that is not available.
class DriverError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AppTransition {
  std::string from;
  UiAction action;
  std::string to;
  EventList emits;
  CostVector cost;
};

struct AppSpec {
  std::string name;
  double launch_time_ms = 0;
  double launch_alloc_kb = 0;
  EventList events;  // declared universe of emitted req events
  std::string initial;
  std::map<std::string, std::vector<View>> states;
  std::vector<AppTransition> transitions;  // declaration order
};

// Parses and validates the JSON app specification. Throws AppSpecError.
AppSpec LoadAppSpec(std::string_view text);

struct LaunchResult {
  GuiState state;
  double launch_ms = 0;
  CostVector launch_cost;
};

struct StepResult {
  GuiState next;
  EventList emitted;  // req events, in order
  CostVector cost;
};

// The seam between exploration/execution and an app. Implementations must be
// deterministic: replaying an action sequence from Reset() reproduces states,
// emissions and costs.
class AppDriver {
 public:
  virtual ~AppDriver() = default;
  virtual LaunchResult Reset() = 0;
  // state must be the driver's current state (std::invalid_argument otherwise).
  virtual std::vector<UiAction> AvailableActions(
      const GuiState& state) const = 0;
  // Throws DriverError if the action is not available in the current state.
  virtual StepResult Perform(const UiAction& action) = 0;
};

using DriverFactory = std::function<std::unique_ptr<AppDriver>()>;

class SimulatedApp : public AppDriver {
 public:
  explicit SimulatedApp(std::shared_ptr<const AppSpec> spec,
                        std::set<std::string> ignore_keys = {});

  LaunchResult Reset() override;
  std::vector<UiAction> AvailableActions(const GuiState& state) const override;
  StepResult Perform(const UiAction& action) override;

  const GuiState& current() const { return current_; }

 private:
  GuiState StateOf(const std::string& id) const;

  std::shared_ptr<const AppSpec> spec_;
  std::set<std::string> ignore_keys_;
  std::string current_id_;
  GuiState current_;
};

DriverFactory SimulatorFactory(std::shared_ptr<const AppSpec> spec,
                               std::set<std::string> ignore_keys = {});

}  // namespace enftest

#endif  // ENFTEST_APP_SIM_H_
