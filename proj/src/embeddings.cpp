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

#include "polcnn/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "polcnn/error.hpp"

namespace polcnn {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool is_integer(std::string_view s) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

SentenceTensor::SentenceTensor(int rows, int dim, int length)
    : rows_(rows),
      dim_(dim),
      length_(length),
      values_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(dim), 0.0) {
  if (rows < 1 || dim < 1 || length < 1 || length > rows) {
    throw InputError(fmt::format("invalid sentence tensor shape {}x{} with length {}",
                                 rows, dim, length));
  }
}

bool SentenceTensor::well_formed() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) return false;
    if (i >= static_cast<std::size_t>(length_) * dim_ && values_[i] != 0.0) return false;
  }
  return true;
}

bool StaticEmbeddingTable::insert(std::string token, std::span<const float> vector) {
  if (static_cast<int>(vector.size()) != dim_) {
    throw InputError(fmt::format("vector for '{}' has length {}, table dim is {}", token,
                                 vector.size(), dim_));
  }
  if (!std::all_of(vector.begin(), vector.end(), [](float v) { return std::isfinite(v); })) {
    throw InputError(fmt::format("vector for '{}' has a non-finite value", token));
  }
  const auto [it, inserted] = index_.emplace(std::move(token), data_.size());
  if (inserted) data_.insert(data_.end(), vector.begin(), vector.end());
  return inserted;
}

std::optional<std::span<const float>> StaticEmbeddingTable::find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return std::span<const float>(data_.data() + it->second, static_cast<std::size_t>(dim_));
}

StaticEmbeddingTable load_static_vectors(std::istream& in) {
  std::optional<StaticEmbeddingTable> table;
  std::vector<float> vec;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (first_content_line) {
      first_content_line = false;
      if (fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) continue;
    }
    const int dim = static_cast<int>(fields.size()) - 1;
    if (!table) {
      if (dim < 1) throw InputError(fmt::format("line {}: token without a vector", line_no));
      table.emplace(dim);
    }
    if (dim != table->dim()) {
      throw InputError(fmt::format("line {}: vector length {} differs from dim {}", line_no,
                                   dim, table->dim()));
    }
    vec.resize(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
      const auto f = fields[static_cast<std::size_t>(k) + 1];
      float value = 0.0f;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(value)) {
        throw InputError(fmt::format("line {}: unparsable float '{}'", line_no, f));
      }
      vec[static_cast<std::size_t>(k)] = value;
    }
    table->insert(std::string(fields[0]), vec);
  }
  if (!table) throw InputError("static vector file has no data lines");
  return std::move(*table);
}

StaticEmbeddingTable load_static_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read static vectors " + path.string());
  try {
    return load_static_vectors(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_static_vectors(std::ostream& out,
                          const std::vector<std::pair<std::string, std::vector<float>>>& rows) {
  for (const auto& [token, vec] : rows) {
    out << token;
    for (float v : vec) out << ' ' << fmt::format("{}", v);
    out << '\n';
  }
}

SentenceTensor embed_static(std::span<const std::string> tokens,
                            const StaticEmbeddingTable& table, OovCounter& oov,
                            int max_len) {
  if (tokens.empty()) throw InputError("cannot embed an empty token list");
  const int length = std::min(static_cast<int>(tokens.size()), max_len);
  SentenceTensor x(max_len, table.dim(), length);
  std::size_t missing = 0;
  for (int i = 0; i < length; ++i) {
    const auto vec = table.find(tokens[static_cast<std::size_t>(i)]);
    if (!vec) {
      ++missing;
      continue;
    }
    std::copy(vec->begin(), vec->end(), x.row(i).begin());
  }
  oov.add(missing);
  return x;
}

SentenceTensor embed_static(std::span<const std::string> tokens,
                            const StaticEmbeddingTable& table, int max_len) {
  OovCounter unused;
  return embed_static(tokens, table, unused, max_len);
}

void ContextualStore::add(Record record) {
  if (record.rows < 1) throw InputError("contextual record " + record.id + " has no rows");
  if (record.values.size() != static_cast<std::size_t>(record.rows) * dim_) {
    throw InputError(fmt::format("contextual record {} has {} values, expected {}x{}",
                                 record.id, record.values.size(), record.rows, dim_));
  }
  if (!std::all_of(record.values.begin(), record.values.end(),
                   [](float v) { return std::isfinite(v); })) {
    throw InputError("contextual record " + record.id + " has a non-finite value");
  }
  if (!index_.emplace(record.id, records_.size()).second) {
    throw InputError("duplicate contextual record id " + record.id);
  }
  records_.push_back(std::move(record));
}

const ContextualStore::Record* ContextualStore::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

SentenceTensor embed_contextual(std::string_view sentence_id, const ContextualStore& store,
                                int max_len) {
  const auto* record = store.find(sentence_id);
  if (record == nullptr) {
    throw InputError("unknown sentence id " + std::string(sentence_id));
  }
  const int length = std::min(static_cast<int>(record->rows), max_len);
  SentenceTensor x(max_len, static_cast<int>(store.dim()), length);
  for (int i = 0; i < length; ++i) {
    const auto* src = record->values.data() + static_cast<std::size_t>(i) * store.dim();
    std::copy(src, src + store.dim(), x.row(i).begin());
  }
  return x;
}

StaticProvider::StaticProvider(StaticEmbeddingTable table, std::string description)
    : table_(std::move(table)), description_(std::move(description)) {}

SentenceTensor StaticProvider::embed(const LabeledSentence& sentence) const {
  return embed_static(sentence.tokens, table_, oov_);
}

ContextualProvider::ContextualProvider(ContextualStore store, std::string description)
    : store_(std::move(store)), description_(std::move(description)) {}

SentenceTensor ContextualProvider::embed(const LabeledSentence& sentence) const {
  return embed_contextual(sentence.id, store_);
}

}  // namespace polcnn
