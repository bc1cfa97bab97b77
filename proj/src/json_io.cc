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

#include "enftest/json_io.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace enftest {

using nlohmann::json;

json ViewsToJson(const std::vector<View>& views) {
  json out = json::array();
  for (const auto& v : views) {
    json props = json::object();
    for (const auto& [key, value] : v.properties) {
      std::visit([&](const auto& x) { props[key] = x; }, value);
    }
    out.push_back({{"id", v.id}, {"properties", props}});
  }
  return out;
}

std::vector<View> ViewsFromJson(const json& j) {
  std::vector<View> out;
  for (const auto& v : j) {
    View view;
    view.id = v.at("id").get<std::string>();
    for (const auto& [key, value] : v.at("properties").items()) {
      if (value.is_boolean()) {
        view.properties[key] = value.get<bool>();
      } else if (value.is_number_integer()) {
        view.properties[key] = value.get<std::int64_t>();
      } else {
        view.properties[key] = value.get<std::string>();
      }
    }
    out.push_back(std::move(view));
  }
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace enftest
