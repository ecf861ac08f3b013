// Copyright 2026 The polcnn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace polcnn::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

// Record of one command invocation: resolved flags, seeds, input digests.
class RunManifest {
 public:
  RunManifest(std::string command, const std::vector<std::string>& argv);

  void flag(const std::string& name, nlohmann::ordered_json value);
  void seed(const std::string& name, std::uint64_t value);
  // Digests a file, or every regular file below a directory.
  void input(const std::filesystem::path& path);
  void output(const std::filesystem::path& path);

  void write(const std::filesystem::path& path) const;

 private:
  nlohmann::ordered_json json_;
};

}  // namespace polcnn::cli
