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

#ifndef ENFTEST_RIPPER_H_
#define ENFTEST_RIPPER_H_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "enftest/app_sim.h"
#include "enftest/model.h"

namespace enftest {

using ActionPath = std::vector<UiAction>;

struct GuiNode {
  std::string signature;
  std::vector<View> views;
};

struct GuiEdge {
  std::string from;
  UiAction action;
  std::string to;
  EventList annotation;  // emitted req events restricted to the alphabet
};

// Ripped GUI graph. Nodes keep discovery order; edges keep execution order.
struct AugmentedGuiModel {
  std::vector<GuiNode> nodes;
  std::string initial;
  std::vector<GuiEdge> edges;
  // Canonical access path for each node (first one found).
  std::map<std::string, ActionPath> log;

  const GuiNode* FindNode(std::string_view signature) const;
  bool operator==(const AugmentedGuiModel& other) const;
};

class RipError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Breadth-first exploration: each (state, action) pair is executed at most
// once, frontier states are reached by reset and replay of their access path,
// and at most `budget` exploratory actions are performed.
AugmentedGuiModel Rip(AppDriver& driver, const EventList& alphabet,
                      std::size_t budget);

std::string ExportGuiModel(const AugmentedGuiModel& model);
// Throws std::runtime_error on malformed content.
AugmentedGuiModel ImportGuiModel(std::string_view text);

}  // namespace enftest

#endif  // ENFTEST_RIPPER_H_
