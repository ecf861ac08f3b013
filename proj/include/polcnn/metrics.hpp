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

#include <cstddef>
#include <span>
#include <vector>

namespace polcnn {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // true-class count

  bool operator==(const ClassMetrics&) const = default;
};

struct EvalReport {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassMetrics> per_class;
  std::vector<std::vector<std::size_t>> confusion;  // rows true, columns predicted
  std::size_t n = 0;

  bool operator==(const EvalReport&) const = default;
};

// Metrics from a square confusion matrix. Precision, recall and F1 are 0
// where undefined; macro-F1 averages over every class, so classes absent from
// both truth and prediction pull it down. Throws InputError when the matrix
// is not square or holds no counts.
EvalReport report_from_confusion(std::vector<std::vector<std::size_t>> confusion);

// Class indices in [0, classes).
EvalReport score_predictions(std::span<const int> truth, std::span<const int> predicted,
                             int classes);

}  // namespace polcnn
