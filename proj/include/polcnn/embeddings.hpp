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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polcnn/corpus.hpp"

namespace polcnn {

// Rows of the fixed input space every sentence is embedded into.
inline constexpr int kMaxSentenceLength = 60;
inline constexpr int kDefaultStaticDim = 300;

// rows x dim row-major matrix of per-token vectors. Rows at index >= length()
// are zero padding.
class SentenceTensor {
 public:
  SentenceTensor() = default;
  SentenceTensor(int rows, int dim, int length);

  int rows() const { return rows_; }
  int dim() const { return dim_; }
  int length() const { return length_; }

  std::span<const double> values() const { return values_; }
  std::span<const double> row(int r) const {
    return {values_.data() + static_cast<std::size_t>(r) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  std::span<double> row(int r) {
    return {values_.data() + static_cast<std::size_t>(r) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  double at(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * dim_ + c];
  }

  // Zero padding below length() and every value finite.
  bool well_formed() const;

  bool operator==(const SentenceTensor&) const = default;

 private:
  int rows_ = 0;
  int dim_ = 0;
  int length_ = 0;
  std::vector<double> values_;
};

// Token -> vector lookup table with a single dimensionality.
class StaticEmbeddingTable {
 public:
  explicit StaticEmbeddingTable(int dim = 0) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }

  // Returns false when the token is already present (first entry wins).
  // Throws InputError on a length mismatch or non-finite value.
  bool insert(std::string token, std::span<const float> vector);

  std::optional<std::span<const float>> find(std::string_view token) const;

 private:
  int dim_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Parses `token v1 ... vd` lines; a first line of exactly two integers is a
// count/dim header and is skipped. Duplicate tokens keep their first vector.
StaticEmbeddingTable load_static_vectors(std::istream& in);
StaticEmbeddingTable load_static_vectors(const std::filesystem::path& path);
void write_static_vectors(std::ostream& out,
                          const std::vector<std::pair<std::string, std::vector<float>>>& rows);

// Counts out-of-vocabulary lookups; safe to share between threads.
class OovCounter {
 public:
  void add(std::size_t n) { count_.fetch_add(n, std::memory_order_relaxed); }
  std::size_t value() const { return count_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::size_t> count_{0};
};

// Row i holds table[tokens[i]] for i < min(|tokens|, max_len); unknown
// tokens map to zero rows and are counted. Throws InputError on an empty
// token list.
SentenceTensor embed_static(std::span<const std::string> tokens,
                            const StaticEmbeddingTable& table, OovCounter& oov,
                            int max_len = kMaxSentenceLength);
SentenceTensor embed_static(std::span<const std::string> tokens,
                            const StaticEmbeddingTable& table,
                            int max_len = kMaxSentenceLength);

// Precomputed per-sentence token matrices, in file order.
class ContextualStore {
 public:
  struct Record {
    std::string id;
    std::uint32_t rows = 0;
    std::vector<float> values;  // rows x dim, row-major

    bool operator==(const Record&) const = default;
  };

  ContextualStore() = default;
  ContextualStore(std::uint32_t dim, std::string meta) : dim_(dim), meta_(std::move(meta)) {}

  std::uint32_t dim() const { return dim_; }
  const std::string& meta() const { return meta_; }
  const std::vector<Record>& records() const { return records_; }

  // Throws InputError on duplicate id, zero rows, wrong size or non-finite values.
  void add(Record record);
  const Record* find(std::string_view id) const;

  bool operator==(const ContextualStore& other) const {
    return dim_ == other.dim_ && meta_ == other.meta_ && records_ == other.records_;
  }

 private:
  std::uint32_t dim_ = 0;
  std::string meta_;
  std::vector<Record> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// SEMB binary format, little-endian. Read errors carry the byte offset.
ContextualStore read_semb(std::istream& in);
void write_semb(std::ostream& out, const ContextualStore& store);
ContextualStore load_contextual_store(const std::filesystem::path& path);
void save_contextual_store(const std::filesystem::path& path, const ContextualStore& store);

// Copies the first min(T, max_len) stored rows. Throws InputError
// "unknown sentence id <id>" when absent.
SentenceTensor embed_contextual(std::string_view sentence_id,
                                const ContextualStore& store,
                                int max_len = kMaxSentenceLength);

// Source of sentence tensors for training and evaluation.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dim() const = 0;
  virtual SentenceTensor embed(const LabeledSentence& sentence) const = 0;
  virtual std::string describe() const = 0;
};

class StaticProvider final : public EmbeddingProvider {
 public:
  StaticProvider(StaticEmbeddingTable table, std::string description);

  int dim() const override { return table_.dim(); }
  SentenceTensor embed(const LabeledSentence& sentence) const override;
  std::string describe() const override { return description_; }
  std::size_t oov_count() const { return oov_.value(); }

 private:
  StaticEmbeddingTable table_;
  std::string description_;
  mutable OovCounter oov_;
};

class ContextualProvider final : public EmbeddingProvider {
 public:
  ContextualProvider(ContextualStore store, std::string description);

  int dim() const override { return static_cast<int>(store_.dim()); }
  SentenceTensor embed(const LabeledSentence& sentence) const override;
  std::string describe() const override { return description_; }

 private:
  ContextualStore store_;
  std::string description_;
};

}  // namespace polcnn
