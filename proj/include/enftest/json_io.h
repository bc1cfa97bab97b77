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

#ifndef ENFTEST_JSON_IO_H_
#define ENFTEST_JSON_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "enftest/app_sim.h"
#include "json.hpp"

namespace enftest {

nlohmann::json ViewsToJson(const std::vector<View>& views);
std::vector<View> ViewsFromJson(const nlohmann::json& j);

// Throws std::runtime_error when the file cannot be read or written.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& content);

}  // namespace enftest

#endif  // ENFTEST_JSON_IO_H_
