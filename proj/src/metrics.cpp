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

#include <fmt/format.h>

#include "polcnn/error.hpp"

namespace polcnn {

EvalReport report_from_confusion(std::vector<std::vector<std::size_t>> confusion) {
  const std::size_t k = confusion.size();
  for (const auto& row : confusion) {
    if (row.size() != k) throw InputError("confusion matrix must be square");
  }
  EvalReport r;
  r.per_class.resize(k);
  std::size_t correct = 0;
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t p = 0; p < k; ++p) r.n += confusion[t][p];
    correct += confusion[t][t];
  }
  if (r.n == 0) throw InputError("cannot score an empty evaluation");
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n);

  double f1_sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t predicted = 0;
    std::size_t actual = 0;
    for (std::size_t o = 0; o < k; ++o) {
      predicted += confusion[o][c];
      actual += confusion[c][o];
    }
    auto& m = r.per_class[c];
    const auto tp = static_cast<double>(confusion[c][c]);
    m.support = actual;
    m.precision = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
    m.recall = actual > 0 ? tp / static_cast<double>(actual) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    f1_sum += m.f1;
  }
  r.macro_f1 = f1_sum / static_cast<double>(k);
  r.confusion = std::move(confusion);
  return r;
}

EvalReport score_predictions(std::span<const int> truth, std::span<const int> predicted,
                             int classes) {
  if (truth.size() != predicted.size()) {
    throw InputError("truth and prediction counts differ");
  }
  const auto k = static_cast<std::size_t>(classes);
  std::vector<std::vector<std::size_t>> confusion(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = predicted[i];
    if (t < 0 || t >= classes || p < 0 || p >= classes) {
      throw InputError(fmt::format("class index out of range at item {}", i));
    }
    ++confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  return report_from_confusion(std::move(confusion));
}

}  // namespace polcnn
