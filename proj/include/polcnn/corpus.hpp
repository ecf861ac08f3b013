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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace polcnn {

// Number of top-level policy domains in the manifesto coding scheme.
inline constexpr int kNumDomains = 7;

// Canonical name of domain 1..7.
std::string_view domain_name(int domain);

struct LabeledSentence {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  std::optional<int> label;  // domain code 1..7
  std::string source;
  std::optional<std::string> date;  // ISO-8601

  bool operator==(const LabeledSentence&) const = default;
};

// Ordered, immutable collection of sentences with unique ids.
class Corpus {
 public:
  Corpus() = default;
  // Throws InputError on duplicate ids or labels outside 1..7.
  Corpus(std::string name, std::string provenance,
         std::vector<LabeledSentence> sentences);

  const std::string& name() const { return name_; }
  const std::string& provenance() const { return provenance_; }
  const std::vector<LabeledSentence>& sentences() const { return sentences_; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  std::size_t labeled_count() const;

  const LabeledSentence* find(std::string_view id) const;

  bool operator==(const Corpus& other) const {
    return name_ == other.name_ && provenance_ == other.provenance_ &&
           sentences_ == other.sentences_;
  }

 private:
  std::string name_;
  std::string provenance_;
  std::vector<LabeledSentence> sentences_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Abbreviations that never end a sentence, lowercase with trailing period.
inline constexpr std::array<std::string_view, 9> kAbbreviations = {
    "dr.", "mr.", "mrs.", "p.m.", "a.m.", "e.g.", "i.e.", "no.", "st."};

// Splits a document into sentences at '.', '!' or '?' runs followed by
// whitespace and an uppercase letter or digit, except after the listed
// abbreviations. Sentences are whitespace-trimmed and never empty.
std::vector<std::string> segment_sentences(std::string_view text);

// Lowercases (ASCII), splits on whitespace, and emits leading and trailing
// punctuation of each chunk as single-character tokens. Internal punctuation
// such as hyphens and apostrophes stays inside the token.
std::vector<std::string> tokenize(std::string_view sentence);

struct RecordError {
  std::size_t line;  // 1-based physical line where the record starts
  std::string message;
};

struct ManifestoIngest {
  Corpus corpus;
  std::vector<RecordError> errors;
};

// Parses a `text,code` CSV export. Well-formed rows become sentences in input
// order; malformed rows are reported in `errors` and skipped. Code "000" and
// the heading marker "H" produce unlabeled sentences. Throws InputError when
// the header itself is unusable.
ManifestoIngest ingest_manifesto_csv(std::istream& in, std::string_view source);

// Reads every `<source>_<YYYY-MM-DD>.txt` file in `dir` (sorted by name) and
// segments it into unlabeled sentences. Throws InputError on an unreadable
// file, a non-conforming filename, or an empty directory.
Corpus ingest_briefings(const std::filesystem::path& dir);

struct SplitResult {
  Corpus train;
  Corpus validation;
  Corpus test;
  std::uint64_t seed = 0;
};

// Stratified 70/15/15 split of the labeled sentences.
SplitResult split_corpus(const Corpus& corpus, std::uint64_t seed);

// Per-class part sizes used by split_corpus. Part j of the result receives
// percents[j] of the items overall; every part after the first gets
// round(percents[j] * N / 100) items and the first takes the rest. Cells of
// the later parts are their quota rounded down or up, the first part takes
// each class's remainder, and the choice minimises the total absolute
// rounding error. Every cell ends within one item of its quota.
std::vector<std::vector<std::size_t>> allocate_stratified(
    const std::vector<std::size_t>& class_sizes, const std::vector<std::size_t>& percents);

// Fraction of labeled sentences per domain; index 0 holds domain 1.
using LabelDistribution = std::array<double, kNumDomains>;

LabelDistribution label_distribution(const Corpus& corpus);

// Canonical JSON-lines interchange: {"id","text","label","source","date"}.
void write_corpus_jsonl(std::ostream& out, const Corpus& corpus);
Corpus read_corpus_jsonl(std::istream& in, std::string name);

Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

}  // namespace polcnn
