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

#include "enftest/ripper.h"

#include <deque>
#include <set>

#include "enftest/json_io.h"
#include "json.hpp"

namespace enftest {

using nlohmann::json;

const GuiNode* AugmentedGuiModel::FindNode(std::string_view signature) const {
  for (const auto& n : nodes) {
    if (n.signature == signature) return &n;
  }
  return nullptr;
}

bool AugmentedGuiModel::operator==(const AugmentedGuiModel& other) const {
  if (initial != other.initial || log != other.log) return false;
  if (nodes.size() != other.nodes.size() || edges.size() != other.edges.size()) {
    return false;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].signature != other.nodes[i].signature ||
        nodes[i].views != other.nodes[i].views) {
      return false;
    }
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& a = edges[i];
    const auto& b = other.edges[i];
    if (a.from != b.from || !(a.action == b.action) || a.to != b.to ||
        a.annotation != b.annotation) {
      return false;
    }
  }
  return true;
}

namespace {

GuiState Navigate(AppDriver& driver, const ActionPath& path,
                  const std::string& expected) {
  GuiState state = driver.Reset().state;
  try {
    for (const auto& a : path) state = driver.Perform(a).next;
  } catch (const DriverError& e) {
    throw RipError(std::string("replay failed, driver is not deterministic: ") +
                   e.what());
  }
  if (state.signature != expected) {
    throw RipError("replay reached " + state.signature + " instead of " +
                   expected + ", driver is not deterministic");
  }
  return state;
}

}  // namespace

AugmentedGuiModel Rip(AppDriver& driver, const EventList& alphabet,
                      std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("rip budget must be >= 1");
  AugmentedGuiModel model;
  const GuiState start = driver.Reset().state;
  model.initial = start.signature;
  model.nodes.push_back({start.signature, start.views});
  model.log[start.signature] = {};

  std::deque<std::string> queue{start.signature};
  std::size_t performed = 0;
  while (!queue.empty() && performed < budget) {
    const std::string sig = queue.front();
    queue.pop_front();
    const ActionPath access = model.log.at(sig);
    GuiState here = Navigate(driver, access, sig);
    const auto actions = driver.AvailableActions(here);
    bool at_node = true;
    for (const auto& action : actions) {
      if (performed >= budget) break;
      if (!at_node) here = Navigate(driver, access, sig);
      StepResult r;
      try {
        r = driver.Perform(action);
      } catch (const DriverError& e) {
        throw RipError(std::string("advertised action failed: ") + e.what());
      }
      ++performed;
      at_node = false;
      model.edges.push_back({sig, action, r.next.signature,
                             FilterToAlphabet(r.emitted, alphabet)});
      if (!model.FindNode(r.next.signature)) {
        model.nodes.push_back({r.next.signature, r.next.views});
        auto path = access;
        path.push_back(action);
        model.log[r.next.signature] = std::move(path);
        queue.push_back(r.next.signature);
      }
    }
  }
  return model;
}

std::string ExportGuiModel(const AugmentedGuiModel& model) {
  json nodes = json::array();
  for (const auto& n : model.nodes) {
    nodes.push_back({{"signature", n.signature}, {"views", ViewsToJson(n.views)}});
  }
  json edges = json::array();
  for (const auto& e : model.edges) {
    edges.push_back({{"from", e.from},
                     {"action", EncodeAction(e.action)},
                     {"to", e.to},
                     {"annotation", e.annotation}});
  }
  json log = json::array();
  for (const auto& n : model.nodes) {
    json path = json::array();
    for (const auto& a : model.log.at(n.signature)) path.push_back(EncodeAction(a));
    log.push_back({{"node", n.signature}, {"path", path}});
  }
  json doc = {{"nodes", nodes}, {"initial", model.initial}, {"edges", edges},
              {"log", log}};
  return doc.dump(2) + "\n";
}

AugmentedGuiModel ImportGuiModel(std::string_view text) {
  AugmentedGuiModel model;
  try {
    const json doc = json::parse(text);
    for (const auto& n : doc.at("nodes")) {
      model.nodes.push_back({n.at("signature").get<std::string>(),
                             ViewsFromJson(n.at("views"))});
    }
    model.initial = doc.at("initial").get<std::string>();
    for (const auto& e : doc.at("edges")) {
      model.edges.push_back({e.at("from").get<std::string>(),
                             DecodeAction(e.at("action").get<std::string>()),
                             e.at("to").get<std::string>(),
                             e.at("annotation").get<EventList>()});
    }
    for (const auto& entry : doc.at("log")) {
      ActionPath path;
      for (const auto& a : entry.at("path")) {
        path.push_back(DecodeAction(a.get<std::string>()));
      }
      model.log[entry.at("node").get<std::string>()] = std::move(path);
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed GUI model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed GUI model: ") + e.what());
  }
  if (!model.FindNode(model.initial)) {
    throw std::runtime_error("malformed GUI model: initial node is missing");
  }
  for (const auto& e : model.edges) {
    if (!model.FindNode(e.from) || !model.FindNode(e.to)) {
      throw std::runtime_error("malformed GUI model: dangling edge");
    }
  }
  for (const auto& n : model.nodes) {
    if (!model.log.count(n.signature)) {
      throw std::runtime_error("malformed GUI model: node without access path");
    }
  }
  return model;
}

}  // namespace enftest
