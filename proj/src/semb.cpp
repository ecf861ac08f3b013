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

// SEMB reader/writer. Layout (little-endian):
//   "SEMB" | u32 version=1 | u32 dim | u32 meta_len | meta | u64 record_count
//   per record: u32 id_len | id | u32 T | T*dim float32, row-major
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "polcnn/embeddings.hpp"
#include "polcnn/error.hpp"

namespace polcnn {
namespace {

constexpr std::array<char, 4> kSembMagic = {'S', 'E', 'M', 'B'};
constexpr std::uint32_t kSembVersion = 1;

class LeReader {
 public:
  explicit LeReader(std::istream& in) : in_(in) {}

  std::uint64_t offset() const { return offset_; }

  void bytes(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (got != n) {
      throw InputError(fmt::format("truncated SEMB data: {} at offset {}", what, offset_ + got));
    }
    offset_ += n;
  }

  template <typename T>
  T uint(const char* what) {
    std::array<unsigned char, sizeof(T)> buf{};
    bytes(reinterpret_cast<char*>(buf.data()), buf.size(), what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
    return value;
  }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

template <typename T>
void put_uint(std::ostream& out, T value) {
  std::array<char, sizeof(T)> buf{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(buf.data(), buf.size());
}

}  // namespace

ContextualStore read_semb(std::istream& in) {
  LeReader r(in);
  std::array<char, 4> magic{};
  r.bytes(magic.data(), magic.size(), "magic");
  if (magic != kSembMagic) throw InputError("bad magic at offset 0");
  const auto version = r.uint<std::uint32_t>("version");
  if (version != kSembVersion) {
    throw InputError(fmt::format("unsupported SEMB version {} at offset 4", version));
  }
  const auto dim = r.uint<std::uint32_t>("dim");
  if (dim == 0) throw InputError("SEMB dim must be positive at offset 8");
  const auto meta_len = r.uint<std::uint32_t>("meta length");
  std::string meta(meta_len, '\0');
  r.bytes(meta.data(), meta.size(), "meta");
  const auto count = r.uint<std::uint64_t>("record count");

  ContextualStore store(dim, std::move(meta));
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto record_offset = r.offset();
    if (r.at_end()) {
      throw InputError(fmt::format(
          "record count mismatch: header declares {} records, data ends after {} at offset {}",
          count, k, record_offset));
    }
    ContextualStore::Record record;
    const auto id_len = r.uint<std::uint32_t>("record id length");
    record.id.resize(id_len);
    r.bytes(record.id.data(), id_len, "record id");
    record.rows = r.uint<std::uint32_t>("record row count");
    const std::uint64_t n = static_cast<std::uint64_t>(record.rows) * dim;
    // Read in bounded chunks so a corrupt row count cannot trigger a huge allocation.
    constexpr std::uint64_t kChunk = 1 << 16;
    std::array<char, 4> buf{};
    for (std::uint64_t done = 0; done < n; done += kChunk) {
      const std::uint64_t take = std::min(kChunk, n - done);
      record.values.reserve(static_cast<std::size_t>(done + take));
      for (std::uint64_t v = 0; v < take; ++v) {
        r.bytes(buf.data(), 4, "record values");
        std::uint32_t bits = 0;
        for (std::size_t i = 0; i < 4; ++i) {
          bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
        }
        record.values.push_back(std::bit_cast<float>(bits));
      }
    }
    try {
      store.add(std::move(record));
    } catch (const InputError& e) {
      throw InputError(fmt::format("{} (record at offset {})", e.what(), record_offset));
    }
  }
  if (!r.at_end()) {
    throw InputError(fmt::format(
        "record count mismatch: trailing data after {} declared records at offset {}", count,
        r.offset()));
  }
  return store;
}

void write_semb(std::ostream& out, const ContextualStore& store) {
  out.write(kSembMagic.data(), kSembMagic.size());
  put_uint<std::uint32_t>(out, kSembVersion);
  put_uint<std::uint32_t>(out, store.dim());
  put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(store.meta().size()));
  out.write(store.meta().data(), static_cast<std::streamsize>(store.meta().size()));
  put_uint<std::uint64_t>(out, store.records().size());
  for (const auto& record : store.records()) {
    put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(record.id.size()));
    out.write(record.id.data(), static_cast<std::streamsize>(record.id.size()));
    put_uint<std::uint32_t>(out, record.rows);
    for (float v : record.values) put_uint<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
}

ContextualStore load_contextual_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read contextual store " + path.string());
  try {
    return read_semb(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void save_contextual_store(const std::filesystem::path& path, const ContextualStore& store) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write contextual store " + path.string());
  write_semb(out, store);
  if (!out) throw Error("failed writing contextual store " + path.string());
}

}  // namespace polcnn
