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

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "polcnn/embeddings.hpp"
#include "test_util.hpp"

namespace polcnn {
namespace {

using testing::read_file;
using testing::TempDir;

const std::filesystem::path kBundled = POLCNN_FIXTURE_DIR;

TEST(Fixtures, BundledFilesMatchGenerator) {
  TempDir dir;
  write_fixtures(dir.path());
  std::size_t compared = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir.path())) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), dir.path());
    ASSERT_TRUE(std::filesystem::exists(kBundled / rel)) << rel;
    EXPECT_EQ(read_file(entry.path()), read_file(kBundled / rel)) << rel;
    ++compared;
  }
  EXPECT_EQ(compared, 9u);
}

TEST(Fixtures, SeparableShape) {
  const auto fx = make_separable_fixture();
  ASSERT_EQ(fx.corpus.size(), 70u);
  std::array<int, 7> counts{};
  for (const auto& s : fx.corpus.sentences()) ++counts[static_cast<std::size_t>(*s.label - 1)];
  for (int c : counts) EXPECT_EQ(c, 10);
  for (const auto& [token, v] : fx.vectors) EXPECT_EQ(v.size(), 16u);
}

TEST(Fixtures, PolysemyTokenMultisetsIdenticalAcrossClasses) {
  const auto fx = make_polysemy_fixture();
  // Group source sentences by text: every text occurs once per domain.
  std::map<std::string, std::set<int>> labels_by_text;
  for (const auto& s : fx.source.sentences()) labels_by_text[s.text].insert(*s.label);
  EXPECT_FALSE(labels_by_text.empty());
  for (const auto& [text, labels] : labels_by_text) EXPECT_EQ(labels.size(), 7u) << text;
  EXPECT_EQ(fx.source.size(), labels_by_text.size() * 7);
}

TEST(Fixtures, ContextualStoresCoverBothCorpora) {
  const auto fx = make_polysemy_fixture();
  for (const auto* store : {&fx.contextual_a, &fx.contextual_b}) {
    for (const auto* corpus : {&fx.source, &fx.target}) {
      for (const auto& s : corpus->sentences()) {
        const auto* rec = store->find(s.id);
        ASSERT_NE(rec, nullptr) << s.id;
        EXPECT_EQ(rec->rows, s.tokens.size());
      }
    }
  }
  // The static tables do not know the target-only words.
  for (const auto& [token, v] : fx.static_a) EXPECT_NE(token, "lockdown");
}

}  // namespace
}  // namespace polcnn
