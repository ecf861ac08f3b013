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

#include "manifest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "polcnn/error.hpp"

namespace polcnn::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialisation failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

RunManifest::RunManifest(std::string command, const std::vector<std::string>& argv) {
  json_["tool"] = "polcnn";
  json_["version"] = kToolVersion;
  json_["command"] = std::move(command);
  json_["argv"] = argv;
  json_["flags"] = nlohmann::ordered_json::object();
  json_["seeds"] = nlohmann::ordered_json::object();
  json_["inputs"] = nlohmann::ordered_json::object();
  json_["outputs"] = nlohmann::ordered_json::array();
}

void RunManifest::flag(const std::string& name, nlohmann::ordered_json value) {
  json_["flags"][name] = std::move(value);
}

void RunManifest::seed(const std::string& name, std::uint64_t value) {
  json_["seeds"][name] = value;
}

void RunManifest::input(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) json_["inputs"][f.string()] = sha256_file(f);
  } else {
    json_["inputs"][path.string()] = sha256_file(path);
  }
}

void RunManifest::output(const std::filesystem::path& path) {
  json_["outputs"].push_back(path.string());
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write manifest " + path.string());
  out << json_.dump(2) << '\n';
}

}  // namespace polcnn::cli
