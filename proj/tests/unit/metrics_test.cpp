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

#include "polcnn/metrics.hpp"

#include <gtest/gtest.h>

#include "common/oracles.hpp"
#include "polcnn/error.hpp"
#include "polcnn/rng.hpp"

namespace polcnn {
namespace {

TEST(Metrics, TwoClassHandFixture) {
  const std::vector<std::vector<std::size_t>> c = {{8, 2}, {3, 7}};
  const auto r = report_from_confusion(c);
  EXPECT_EQ(r.n, 20u);
  EXPECT_NEAR(r.accuracy, 0.75, 1e-12);
  // class 0: P = 8/11, R = 8/10 -> F1 = 16/21; class 1: P = 7/9, R = 7/10 -> F1 = 14/19.
  EXPECT_NEAR(r.per_class[0].precision, 8.0 / 11.0, 1e-12);
  EXPECT_NEAR(r.per_class[0].recall, 0.8, 1e-12);
  EXPECT_NEAR(r.per_class[0].f1, 16.0 / 21.0, 1e-12);
  EXPECT_NEAR(r.per_class[1].f1, 14.0 / 19.0, 1e-12);
  EXPECT_NEAR(r.macro_f1, (16.0 / 21.0 + 14.0 / 19.0) / 2.0, 1e-12);
  EXPECT_NEAR(r.macro_f1, 0.7494, 1e-4);
  EXPECT_EQ(r.per_class[0].support, 10u);
}

TEST(Metrics, ScorePredictionsBuildsConfusion) {
  std::vector<int> truth, pred;
  for (int i = 0; i < 8; ++i) truth.push_back(0), pred.push_back(0);
  for (int i = 0; i < 2; ++i) truth.push_back(0), pred.push_back(1);
  for (int i = 0; i < 3; ++i) truth.push_back(1), pred.push_back(0);
  for (int i = 0; i < 7; ++i) truth.push_back(1), pred.push_back(1);
  const auto r = score_predictions(truth, pred, 2);
  EXPECT_EQ(r.confusion, (std::vector<std::vector<std::size_t>>{{8, 2}, {3, 7}}));
  EXPECT_EQ(r, report_from_confusion(r.confusion));
}

TEST(Metrics, PerfectPredictionsAreExactlyOne) {
  std::vector<int> truth;
  for (int i = 0; i < 70; ++i) truth.push_back(i % 7);
  const auto r = score_predictions(truth, truth, 7);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.macro_f1, 1.0);
}

TEST(Metrics, FixedClassOnBalancedSet) {
  std::vector<int> truth;
  for (int i = 0; i < 70; ++i) truth.push_back(i % 7);
  const std::vector<int> pred(70, 3);
  const auto r = score_predictions(truth, pred, 7);
  EXPECT_NEAR(r.accuracy, 1.0 / 7.0, 1e-12);
  // Only class 3 has nonzero F1: P = 1/7, R = 1 -> F1 = 0.25.
  EXPECT_NEAR(r.macro_f1, 0.25 / 7.0, 1e-12);
}

TEST(Metrics, AbsentClassesCountAsZero) {
  const auto r = score_predictions(std::vector<int>{0, 1}, std::vector<int>{0, 1}, 7);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_NEAR(r.macro_f1, 2.0 / 7.0, 1e-12);
}

TEST(Metrics, ConsistentWithHandOracle) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + rng.below(6);
    std::vector<std::vector<std::size_t>> c(k, std::vector<std::size_t>(k));
    std::size_t total = 0;
    for (auto& row : c) {
      for (auto& v : row) total += (v = rng.below(4) == 0 ? 0 : rng.below(30));
    }
    if (total == 0) c[0][0] = 1;
    const auto r = report_from_confusion(c);
    const auto h = oracle::hand_metrics(c);
    ASSERT_NEAR(r.accuracy, h.accuracy, 1e-12);
    ASSERT_NEAR(r.macro_f1, h.macro_f1, 1e-12);
    for (std::size_t i = 0; i < k; ++i) {
      ASSERT_NEAR(r.per_class[i].f1, h.f1[i], 1e-12);
      std::size_t row = 0;
      for (auto v : c[i]) row += v;
      ASSERT_EQ(r.per_class[i].support, row);
    }
  }
}

TEST(Metrics, Errors) {
  EXPECT_THROW(report_from_confusion({{1, 2}, {3}}), InputError);
  EXPECT_THROW(report_from_confusion({{0, 0}, {0, 0}}), InputError);
  EXPECT_THROW(score_predictions(std::vector<int>{0}, std::vector<int>{0, 1}, 2), InputError);
  EXPECT_THROW(score_predictions(std::vector<int>{2}, std::vector<int>{0}, 2), InputError);
}

}  // namespace
}  // namespace polcnn
