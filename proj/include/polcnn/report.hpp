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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "polcnn/corpus.hpp"
#include "polcnn/metrics.hpp"

namespace polcnn {

struct ComparisonRow {
  std::string experiment;
  double source_accuracy = 0.0;
  double source_f1 = 0.0;
  double target_accuracy = 0.0;
  double target_f1 = 0.0;

  bool operator==(const ComparisonRow&) const = default;
};

// One row per experiment with scores on the held-out source test set and on
// the transfer target. Scores are fractions in [0, 1].
struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  bool operator==(const ComparisonReport&) const = default;
};

enum class TableFormat { text, structured };

// Text: two aligned "Experiment | Accuracy | F1" tables (source corpus, then
// target corpus), accuracy as a percentage and F1 on a 0-100 scale, both to
// 2 decimals. Structured: JSON with fixed key order and 0-1 scores.
// Throws InputError on an empty report, duplicate names, or scores outside [0, 1].
std::string render_table(const ComparisonReport& report, TableFormat format);

// Inverse of render_table(..., TableFormat::structured).
ComparisonReport parse_report(std::string_view structured);

// One line per domain 1..7 with its canonical name and percentage.
std::string render_distribution(const LabelDistribution& dist);

// Accuracy, macro-F1, per-class precision/recall/F1 and the confusion matrix.
std::string render_eval(const EvalReport& report);

nlohmann::ordered_json eval_to_json(const EvalReport& report);

}  // namespace polcnn
