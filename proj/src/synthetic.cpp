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

#include "polcnn/synthetic.hpp"

#include <array>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "polcnn/error.hpp"
#include "polcnn/rng.hpp"

namespace polcnn {
namespace {

constexpr int kSeparableDim = 16;
constexpr int kPolysemyStaticDim = 16;
constexpr int kPolysemyContextDim = 24;

std::vector<float> gaussian_vector(Rng& rng, int dim, double scale = 1.0) {
  std::vector<float> v(static_cast<std::size_t>(dim));
  for (auto& x : v) x = static_cast<float>(scale * rng.normal());
  return v;
}

VectorRows gaussian_table(const std::vector<std::string>& vocab, int dim, std::uint64_t seed,
                          double scale = 1.0) {
  Rng rng(seed);
  VectorRows rows;
  for (const auto& w : vocab) rows.emplace_back(w, gaussian_vector(rng, dim, scale));
  return rows;
}

std::string join_sentence(const std::vector<std::string>& words) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) text += ' ';
    text += words[i];
  }
  text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  return text + ".";
}

LabeledSentence make_sentence(std::string id, std::string text, std::optional<int> label,
                              std::string source) {
  LabeledSentence s;
  s.id = std::move(id);
  s.text = std::move(text);
  s.tokens = tokenize(s.text);
  s.label = label;
  s.source = std::move(source);
  return s;
}

const std::vector<std::string> kFillers = {"we",     "will",   "the",  "our",   "for",
                                           "and",    "to",     "a",    "new",   "plan",
                                           "people", "country", "every", "more", "with"};

const std::array<std::array<const char*, 3>, kNumDomains> kDomainWords = {{
    {"treaty", "embassy", "allies"},
    {"liberty", "rights", "constitution"},
    {"parliament", "election", "councils"},
    {"taxes", "markets", "industry"},
    {"hospitals", "pensions", "schools"},
    {"heritage", "tradition", "policing"},
    {"farmers", "workers", "minorities"},
}};

const std::vector<std::string> kPolysemous = {"support", "bank",    "measures", "order",
                                              "cases",   "release", "scheme",   "advice"};
const std::vector<std::string> kShared = {"the", "government", "will", "our", "people", "new",
                                          "plan", "today", "we", "a", "for", "and", "this"};
const std::vector<std::string> kTargetOnly = {"lockdown", "furlough", "vaccine", "testing"};

std::vector<std::string> polysemy_template(Rng& rng, int min_len, int max_len,
                                           const std::vector<std::string>& extra) {
  const int len = min_len + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len - min_len + 1)));
  std::vector<std::string> words;
  for (int i = 0; i < len; ++i) words.push_back(kShared[rng.below(kShared.size())]);
  // At least two ambiguous words per sentence, plus any domain-shift words.
  const int ambiguous = 2 + static_cast<int>(rng.below(2));
  for (int a = 0; a < ambiguous; ++a) {
    words[rng.below(words.size())] = kPolysemous[rng.below(kPolysemous.size())];
  }
  if (!extra.empty()) {
    words[rng.below(words.size())] = extra[rng.below(extra.size())];
  }
  return words;
}

ContextualStore contextual_store(const std::vector<const Corpus*>& corpora, double sense_scale,
                                 std::uint64_t seed, const std::string& meta) {
  std::vector<std::string> vocab = kShared;
  vocab.insert(vocab.end(), kPolysemous.begin(), kPolysemous.end());
  vocab.insert(vocab.end(), kTargetOnly.begin(), kTargetOnly.end());
  vocab.push_back(".");
  Rng rng(seed);
  std::unordered_map<std::string, std::vector<float>> base;
  for (const auto& w : vocab) base.emplace(w, gaussian_vector(rng, kPolysemyContextDim));
  std::vector<std::vector<float>> senses;
  for (int c = 0; c < kNumDomains; ++c) senses.push_back(gaussian_vector(rng, kPolysemyContextDim));
  const std::set<std::string> ambiguous = [] {
    std::set<std::string> s(kPolysemous.begin(), kPolysemous.end());
    s.insert(kTargetOnly.begin(), kTargetOnly.end());
    return s;
  }();

  ContextualStore store(kPolysemyContextDim, meta);
  for (const Corpus* corpus : corpora) {
    for (const auto& s : corpus->sentences()) {
      ContextualStore::Record record;
      record.id = s.id;
      record.rows = static_cast<std::uint32_t>(s.tokens.size());
      for (const auto& token : s.tokens) {
        const auto& b = base.at(token);
        const bool sense = ambiguous.count(token) > 0;
        for (int j = 0; j < kPolysemyContextDim; ++j) {
          double v = b[static_cast<std::size_t>(j)] + 0.05 * rng.normal();
          if (sense) v += sense_scale * senses[static_cast<std::size_t>(*s.label - 1)][static_cast<std::size_t>(j)];
          record.values.push_back(static_cast<float>(v));
        }
      }
      store.add(std::move(record));
    }
  }
  return store;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

void write_vectors(const std::filesystem::path& path, const VectorRows& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  write_static_vectors(out, rows);
}

}  // namespace

SeparableFixture make_separable_fixture() {
  Rng rng(20200901);
  std::vector<LabeledSentence> sentences;
  for (int domain = 1; domain <= kNumDomains; ++domain) {
    const auto& own = kDomainWords[static_cast<std::size_t>(domain - 1)];
    for (int k = 0; k < 10; ++k) {
      const int len = 5 + static_cast<int>(rng.below(5));
      std::vector<std::string> words;
      for (int i = 0; i < len; ++i) words.push_back(kFillers[rng.below(kFillers.size())]);
      const int marked = 1 + static_cast<int>(rng.below(2));
      for (int m = 0; m < marked; ++m) words[rng.below(words.size())] = own[rng.below(own.size())];
      sentences.push_back(make_sentence(fmt::format("sep-{}-{:02}", domain, k),
                                        join_sentence(words), domain, "separable"));
    }
  }

  std::vector<std::string> vocab = kFillers;
  for (const auto& words : kDomainWords) vocab.insert(vocab.end(), words.begin(), words.end());
  vocab.push_back(".");
  return {Corpus("separable", "synthetic separable fixture", std::move(sentences)),
          gaussian_table(vocab, kSeparableDim, 7, 0.1)};
}

PolysemyFixture make_polysemy_fixture() {
  Rng rng(20200312);
  std::vector<LabeledSentence> source;
  for (int t = 0; t < 40; ++t) {
    const auto text = join_sentence(polysemy_template(rng, 6, 10, {}));
    for (int domain = 1; domain <= kNumDomains; ++domain) {
      source.push_back(make_sentence(fmt::format("poly-src-{:02}-{}", t, domain), text, domain,
                                     "polysemy-source"));
    }
  }
  std::vector<LabeledSentence> target;
  for (int t = 0; t < 12; ++t) {
    const auto text = join_sentence(polysemy_template(rng, 10, 16, kTargetOnly));
    for (int domain = 1; domain <= kNumDomains; ++domain) {
      target.push_back(make_sentence(fmt::format("poly-tgt-{:02}-{}", t, domain), text, domain,
                                     "polysemy-target"));
    }
  }

  PolysemyFixture f{Corpus("polysemy-source", "synthetic polysemy fixture", std::move(source)),
                    Corpus("polysemy-target", "synthetic domain-shifted polysemy fixture",
                           std::move(target)),
                    {}, {}, {}, {}};
  std::vector<std::string> vocab = kShared;
  vocab.insert(vocab.end(), kPolysemous.begin(), kPolysemous.end());
  vocab.push_back(".");
  f.static_a = gaussian_table(vocab, kPolysemyStaticDim, 11);
  f.static_b = gaussian_table(vocab, kPolysemyStaticDim, 12);
  f.contextual_a = contextual_store({&f.source, &f.target}, 0.5, 13,
                                    "synthetic contextual encoder; sense scale 0.5; tokenizer polcnn-1");
  f.contextual_b = contextual_store({&f.source, &f.target}, 1.0, 14,
                                    "synthetic contextual encoder; sense scale 1.0; tokenizer polcnn-1");
  return f;
}

void write_fixtures(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "separable");
  fs::create_directories(dir / "polysemy");

  const auto separable = make_separable_fixture();
  save_corpus(dir / "separable" / "corpus.jsonl", separable.corpus);
  write_vectors(dir / "separable" / "vectors.txt", separable.vectors);

  const auto poly = make_polysemy_fixture();
  save_corpus(dir / "polysemy" / "source.jsonl", poly.source);
  save_corpus(dir / "polysemy" / "target.jsonl", poly.target);
  write_vectors(dir / "polysemy" / "static_a.txt", poly.static_a);
  write_vectors(dir / "polysemy" / "static_b.txt", poly.static_b);
  save_contextual_store(dir / "polysemy" / "contextual_a.semb", poly.contextual_a);
  save_contextual_store(dir / "polysemy" / "contextual_b.semb", poly.contextual_b);

  const nlohmann::ordered_json suite = nlohmann::ordered_json::array({
      {{"name", "M1"}, {"provider_kind", "static"}, {"provider_path", "static_a.txt"}},
      {{"name", "M2"}, {"provider_kind", "static"}, {"provider_path", "static_b.txt"}},
      {{"name", "M3"}, {"provider_kind", "contextual"}, {"provider_path", "contextual_a.semb"}},
      {{"name", "M4"}, {"provider_kind", "contextual"}, {"provider_path", "contextual_b.semb"}},
  });
  write_text(dir / "polysemy" / "suite.json", suite.dump(2) + "\n");
}

}  // namespace polcnn
