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

#include "enftest/app_sim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

namespace enftest {

using nlohmann::json;

bool View::Flag(const std::string& key) const {
  const auto it = properties.find(key);
  if (it == properties.end()) return false;
  if (const auto* b = std::get_if<bool>(&it->second)) return *b;
  return false;
}

namespace {

std::string ValueText(const PropertyValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return "s:" + *s;
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "b:1" : "b:0";
  return "i:" + std::to_string(std::get<std::int64_t>(v));
}

std::uint64_t Fnv1a(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string ComputeSignature(const std::vector<View>& views,
                             const std::set<std::string>& ignore_keys) {
  std::vector<const View*> sorted;
  for (const auto& v : views) sorted.push_back(&v);
  std::sort(sorted.begin(), sorted.end(),
            [](const View* a, const View* b) { return a->id < b->id; });
  std::string canon;
  for (const auto* v : sorted) {
    canon += v->id;
    canon += '\x1e';
    for (const auto& [key, value] : v->properties) {
      if (ignore_keys.count(key)) continue;
      canon += key;
      canon += '\x1f';
      canon += ValueText(value);
      canon += '\x1e';
    }
    canon += '\x1d';
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(Fnv1a(canon)));
  return buf;
}

GuiState GuiState::FromViews(std::vector<View> views,
                             const std::set<std::string>& ignore_keys) {
  std::sort(views.begin(), views.end(),
            [](const View& a, const View& b) { return a.id < b.id; });
  GuiState s;
  s.signature = ComputeSignature(views, ignore_keys);
  s.views = std::move(views);
  return s;
}

UiAction UiAction::Touch(std::string target) {
  UiAction a;
  a.kind = ActionKind::kTouch;
  a.target = std::move(target);
  return a;
}

UiAction UiAction::LongTouch(std::string target) {
  UiAction a;
  a.kind = ActionKind::kLongTouch;
  a.target = std::move(target);
  return a;
}

UiAction UiAction::SetText(std::string target, std::string text) {
  UiAction a;
  a.kind = ActionKind::kSetText;
  a.target = std::move(target);
  a.text = std::move(text);
  return a;
}

UiAction UiAction::KeyEvent(std::string key) {
  UiAction a;
  a.kind = ActionKind::kKeyEvent;
  a.key = std::move(key);
  return a;
}

UiAction UiAction::Scroll(ScrollDirection direction) {
  UiAction a;
  a.kind = ActionKind::kScroll;
  a.direction = direction;
  return a;
}

namespace {

constexpr std::string_view kDirections[] = {"up", "down", "left", "right"};

}  // namespace

std::string EncodeAction(const UiAction& a) {
  switch (a.kind) {
    case ActionKind::kTouch:
      return "touch(" + a.target.value_or("") + ")";
    case ActionKind::kLongTouch:
      return "longTouch(" + a.target.value_or("") + ")";
    case ActionKind::kSetText:
      return "setText(" + a.target.value_or("") + "=" + a.text + ")";
    case ActionKind::kKeyEvent:
      return "keyEvent(" + a.key + ")";
    case ActionKind::kScroll:
      return "scroll(" +
             std::string(kDirections[static_cast<int>(a.direction)]) + ")";
  }
  return {};
}

UiAction DecodeAction(std::string_view text) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.size() < open + 2 ||
      text.back() != ')') {
    throw std::invalid_argument("malformed action '" + std::string(text) + "'");
  }
  const std::string kind(text.substr(0, open));
  const std::string arg(text.substr(open + 1, text.size() - open - 2));
  if (arg.empty()) {
    throw std::invalid_argument("action without argument '" +
                                std::string(text) + "'");
  }
  if (kind == "touch") return UiAction::Touch(arg);
  if (kind == "longTouch") return UiAction::LongTouch(arg);
  if (kind == "keyEvent") return UiAction::KeyEvent(arg);
  if (kind == "setText") {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("setText needs 'target=text'");
    }
    return UiAction::SetText(arg.substr(0, eq), arg.substr(eq + 1));
  }
  if (kind == "scroll") {
    for (std::size_t i = 0; i < std::size(kDirections); ++i) {
      if (arg == kDirections[i]) {
        return UiAction::Scroll(static_cast<ScrollDirection>(i));
      }
    }
  }
  throw std::invalid_argument("unknown action '" + std::string(text) + "'");
}

namespace {

double NonNegative(const json& j, const char* key) {
  if (!j.contains(key)) return 0;
  if (!j.at(key).is_number()) {
    throw AppSpecError(std::string("'") + key + "' must be a number");
  }
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v) || v < 0) {
    throw AppSpecError(std::string("'") + key + "' must be finite and >= 0");
  }
  return v;
}

View ParseView(const json& j) {
  View v;
  v.id = j.at("id").get<std::string>();
  if (v.id.empty()) throw AppSpecError("view id must be non-empty");
  if (j.contains("properties")) {
    for (const auto& [key, value] : j.at("properties").items()) {
      if (value.is_boolean()) {
        v.properties[key] = value.get<bool>();
      } else if (value.is_number_integer()) {
        v.properties[key] = value.get<std::int64_t>();
      } else if (value.is_string()) {
        v.properties[key] = value.get<std::string>();
      } else {
        throw AppSpecError("property '" + key + "' of view '" + v.id +
                           "' must be a string, boolean or integer");
      }
    }
  }
  return v;
}

UiAction ParseSpecAction(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  auto target = [&] { return j.at("target").get<std::string>(); };
  if (kind == "touch") return UiAction::Touch(target());
  if (kind == "longTouch") return UiAction::LongTouch(target());
  if (kind == "setText") {
    return UiAction::SetText(
        target(), j.value("text", std::string(kDefaultInputText)));
  }
  if (kind == "keyEvent") return UiAction::KeyEvent(j.at("key").get<std::string>());
  if (kind == "scroll") {
    return DecodeAction("scroll(" + j.at("direction").get<std::string>() + ")");
  }
  throw AppSpecError("unknown action kind '" + kind + "'");
}

void ValidateTarget(const AppSpec& spec, const AppTransition& t) {
  if (t.action.kind == ActionKind::kKeyEvent ||
      t.action.kind == ActionKind::kScroll) {
    return;
  }
  const auto& views = spec.states.at(t.from);
  const auto it = std::find_if(views.begin(), views.end(), [&](const View& v) {
    return v.id == *t.action.target;
  });
  const std::string where = EncodeAction(t.action) + " in state '" + t.from + "'";
  if (it == views.end()) {
    throw AppSpecError("unknown target view for " + where);
  }
  const char* flag =
      t.action.kind == ActionKind::kSetText ? "editable" : "clickable";
  if (!it->Flag(flag)) {
    throw AppSpecError("target view of " + where + " is not " + flag);
  }
}

// Along every run, cumulative frees must not exceed launch allocation plus
// cumulative allocations. Longest-path relaxation on free - alloc; a cycle
// that keeps improving frees more than it allocates and is rejected.
void ValidateMemoryAccounting(const AppSpec& spec) {
  constexpr double kUnreached = -std::numeric_limits<double>::infinity();
  std::map<std::string, double> best;
  for (const auto& [id, views] : spec.states) best[id] = kUnreached;
  best[spec.initial] = 0;
  const std::size_t rounds = spec.states.size();
  for (std::size_t round = 0; round <= rounds; ++round) {
    bool changed = false;
    for (const auto& t : spec.transitions) {
      if (best[t.from] == kUnreached) continue;
      const double after_alloc = best[t.from] - t.cost.alloc_kb;
      const double after_free = after_alloc + t.cost.free_kb;
      if (after_free > best[t.to] + 1e-9) {
        best[t.to] = after_free;
        changed = true;
      }
    }
    if (!changed) break;
    if (round == rounds) {
      throw AppSpecError(
          "memory accounting: a reachable cycle frees more than it allocates");
    }
  }
  for (const auto& [id, net_free] : best) {
    if (net_free > spec.launch_alloc_kb + 1e-9) {
      throw AppSpecError("memory accounting: reaching state '" + id +
                         "' frees more than was allocated");
    }
  }
}

}  // namespace

AppSpec LoadAppSpec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw AppSpecError(std::string("syntax error: ") + e.what());
  }
  AppSpec spec;
  try {
    spec.name = j.at("name").get<std::string>();
    spec.launch_time_ms = NonNegative(j, "launch_time_ms");
    spec.launch_alloc_kb = NonNegative(j, "launch_alloc_kb");
    spec.events = j.value("events", EventList{});
    spec.initial = j.at("initial").get<std::string>();
    for (const auto& s : j.at("states")) {
      const auto id = s.at("id").get<std::string>();
      std::vector<View> views;
      std::set<std::string> ids;
      for (const auto& v : s.value("views", json::array())) {
        views.push_back(ParseView(v));
        if (!ids.insert(views.back().id).second) {
          throw AppSpecError("duplicate view '" + views.back().id +
                             "' in state '" + id + "'");
        }
      }
      if (!spec.states.emplace(id, std::move(views)).second) {
        throw AppSpecError("duplicate state '" + id + "'");
      }
    }
    for (const auto& t : j.value("transitions", json::array())) {
      AppTransition tr;
      tr.from = t.at("from").get<std::string>();
      tr.to = t.at("to").get<std::string>();
      tr.action = ParseSpecAction(t.at("action"));
      tr.emits = t.value("emits", EventList{});
      if (t.contains("cost")) {
        const auto& c = t.at("cost");
        tr.cost = {NonNegative(c, "cpu_ms"), NonNegative(c, "alloc_kb"),
                   NonNegative(c, "free_kb"), NonNegative(c, "energy_units")};
      }
      spec.transitions.push_back(std::move(tr));
    }
  } catch (const json::exception& e) {
    throw AppSpecError(std::string("malformed app spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw AppSpecError(e.what());
  }

  if (!spec.states.count(spec.initial)) {
    throw AppSpecError("initial state '" + spec.initial + "' is not declared");
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : spec.transitions) {
    for (const auto* s : {&t.from, &t.to}) {
      if (!spec.states.count(*s)) {
        throw AppSpecError("transition references unknown state '" + *s + "'");
      }
    }
    ValidateTarget(spec, t);
    for (const auto& e : t.emits) {
      if (std::find(spec.events.begin(), spec.events.end(), e) ==
          spec.events.end()) {
        throw AppSpecError("emitted event '" + e + "' is not declared");
      }
    }
    if (!seen.insert({t.from, EncodeAction(t.action)}).second) {
      throw AppSpecError("nondeterministic transition " +
                         EncodeAction(t.action) + " from '" + t.from + "'");
    }
  }
  ValidateMemoryAccounting(spec);
  return spec;
}

SimulatedApp::SimulatedApp(std::shared_ptr<const AppSpec> spec,
                           std::set<std::string> ignore_keys)
    : spec_(std::move(spec)), ignore_keys_(std::move(ignore_keys)) {
  current_id_ = spec_->initial;
  current_ = StateOf(current_id_);
}

GuiState SimulatedApp::StateOf(const std::string& id) const {
  return GuiState::FromViews(spec_->states.at(id), ignore_keys_);
}

LaunchResult SimulatedApp::Reset() {
  current_id_ = spec_->initial;
  current_ = StateOf(current_id_);
  CostVector launch;
  launch.alloc_kb = spec_->launch_alloc_kb;
  return {current_, spec_->launch_time_ms, launch};
}

std::vector<UiAction> SimulatedApp::AvailableActions(
    const GuiState& state) const {
  if (state.signature != current_.signature) {
    throw std::invalid_argument("stale GUI state passed to AvailableActions");
  }
  std::vector<UiAction> out;
  for (const auto& t : spec_->transitions) {
    if (t.from == current_id_) out.push_back(t.action);
  }
  return out;
}

StepResult SimulatedApp::Perform(const UiAction& action) {
  for (const auto& t : spec_->transitions) {
    if (t.from == current_id_ && t.action == action) {
      current_id_ = t.to;
      current_ = StateOf(current_id_);
      return {current_, t.emits, t.cost};
    }
  }
  throw DriverError("action " + EncodeAction(action) +
                    " is not available in the current state");
}

DriverFactory SimulatorFactory(std::shared_ptr<const AppSpec> spec,
                               std::set<std::string> ignore_keys) {
  return [spec = std::move(spec), keys = std::move(ignore_keys)] {
    return std::make_unique<SimulatedApp>(spec, keys);
  };
}

}  // namespace enftest
