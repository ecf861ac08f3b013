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

#include "polcnn/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <zlib.h>

#include "polcnn/error.hpp"

namespace polcnn {
namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'C', 'N', 'N'};

class Writer {
 public:
  void u32(std::uint32_t v) { put(v); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
  void raw(const std::uint8_t* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  template <typename T>
  void put(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bytes_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
    }
  }
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32(const char* what) { return get<std::uint32_t>(what); }
  double f64(const char* what) { return std::bit_cast<double>(get<std::uint64_t>(what)); }
  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  template <typename T>
  T get(const char* what) {
    if (remaining() < sizeof(T)) {
      throw InputError(fmt::format("model file truncated reading {} at offset {}", what, pos_));
    }
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in pieces.
  std::size_t done = 0;
  while (done < bytes.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(bytes.size() - done, 1u << 30));
    crc = ::crc32(crc, bytes.data() + done, n);
    done += n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> serialize_model(const CnnModel& model) {
  const auto& cfg = model.config;
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kModelFormatVersion);
  w.u32(static_cast<std::uint32_t>(cfg.dim));
  w.u32(static_cast<std::uint32_t>(cfg.max_len));
  w.u32(static_cast<std::uint32_t>(cfg.widths.size()));
  for (int width : cfg.widths) w.u32(static_cast<std::uint32_t>(width));
  w.u32(static_cast<std::uint32_t>(cfg.filters_per_width));
  w.u32(static_cast<std::uint32_t>(cfg.classes));
  w.f64(cfg.dropout_rate);
  for (const auto group : model.params.groups()) {
    for (double v : group) w.f64(v);
  }
  const std::uint32_t checksum = crc32(w.bytes());
  w.u32(checksum);
  return std::move(w.bytes());
}

CnnModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw InputError("bad magic: not a PCNN model file");
  }
  Reader r(bytes.subspan(4));
  const auto version = r.u32("version");
  if (version != kModelFormatVersion) {
    throw InputError(fmt::format("unsupported model version {} (this reader handles {})", version,
                                 kModelFormatVersion));
  }
  if (bytes.size() < 12) throw InputError("model file truncated");
  const auto body = bytes.first(bytes.size() - 4);
  Reader tail(bytes.last(4));
  const auto stored = tail.u32("checksum");
  const auto actual = crc32(body);
  if (stored != actual) {
    throw InputError(fmt::format("checksum mismatch: stored {:08x}, computed {:08x}", stored,
                                 actual));
  }

  Reader in(body.subspan(8));
  ModelConfig cfg;
  cfg.dim = static_cast<int>(in.u32("dim"));
  cfg.max_len = static_cast<int>(in.u32("max_len"));
  const auto width_count = in.u32("width count");
  if (width_count > in.remaining() / 4) throw InputError("model file truncated reading widths");
  cfg.widths.clear();
  for (std::uint32_t i = 0; i < width_count; ++i) cfg.widths.push_back(static_cast<int>(in.u32("width")));
  cfg.filters_per_width = static_cast<int>(in.u32("filters_per_width"));
  cfg.classes = static_cast<int>(in.u32("classes"));
  cfg.dropout_rate = in.f64("dropout_rate");
  cfg.validate();

  std::size_t expected = 0;
  for (int width : cfg.widths) {
    expected += static_cast<std::size_t>(cfg.filters_per_width) * (static_cast<std::size_t>(width) * cfg.dim + 1);
  }
  expected += static_cast<std::size_t>(cfg.classes) * (cfg.feature_count() + 1);
  if (in.remaining() != expected * 8) {
    throw InputError(fmt::format("model file holds {} parameter bytes, config requires {}",
                                 in.remaining(), expected * 8));
  }
  CnnModel model{cfg, Parameters::zeros(cfg)};
  for (auto group : model.params.groups()) {
    for (auto& v : group) v = in.f64("parameter");
  }
  return model;
}

void save_model(const CnnModel& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing model " + path.string());
}

CnnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read model " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  try {
    return deserialize_model(bytes);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace polcnn
