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

// Deterministic synthetic corpora used by the acceptance suite and bundled
// under fixtures/.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "polcnn/corpus.hpp"
#include "polcnn/embeddings.hpp"

namespace polcnn {

using VectorRows = std::vector<std::pair<std::string, std::vector<float>>>;

// 70 sentences, 10 per domain; each sentence carries words only its domain
// uses. Static vectors of dimension 16, entries with standard deviation 0.1.
struct SeparableFixture {
  Corpus corpus;
  VectorRows vectors;
};

SeparableFixture make_separable_fixture();

// Every token sequence appears once per domain, so static vectors carry no
// label information. Contextual vectors add a domain-dependent sense
// component to the ambiguous words, standing in for the sentence's context.
// The target corpus is shifted: longer sentences and words unknown to the
// static tables.
struct PolysemyFixture {
  Corpus source;
  Corpus target;
  VectorRows static_a;
  VectorRows static_b;
  ContextualStore contextual_a;  // weaker sense signal
  ContextualStore contextual_b;
};

PolysemyFixture make_polysemy_fixture();

// Writes separable/{corpus.jsonl,vectors.txt} and
// polysemy/{source.jsonl,target.jsonl,static_a.txt,static_b.txt,
// contextual_a.semb,contextual_b.semb,suite.json} under `dir`.
void write_fixtures(const std::filesystem::path& dir);

}  // namespace polcnn
