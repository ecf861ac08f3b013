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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "polcnn/cnn.hpp"

namespace polcnn {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// PCNN model file, little-endian:
//   "PCNN" | u32 version | u32 dim | u32 max_len | u32 width_count |
//   u32 widths[width_count] | u32 filters_per_width | u32 classes |
//   f64 dropout_rate | f64 parameters in Parameters::groups() order |
//   u32 CRC-32 of every preceding byte
std::vector<std::uint8_t> serialize_model(const CnnModel& model);

// Throws InputError on bad magic, unsupported version, checksum mismatch,
// truncation, trailing bytes, or an invalid config.
CnnModel deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const CnnModel& model, const std::filesystem::path& path);
CnnModel load_model(const std::filesystem::path& path);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace polcnn
