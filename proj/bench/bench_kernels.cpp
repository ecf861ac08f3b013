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

// Serial reference kernels versus their OpenMP counterparts at the default
// architecture (d = 300, 60 rows, widths {2,3,4}, 100 filters each).

#include <benchmark/benchmark.h>

#include <vector>

#include "polcnn/cnn.hpp"
#include "polcnn/kernels.hpp"
#include "polcnn/rng.hpp"

namespace {

using polcnn::SentenceTensor;

std::vector<SentenceTensor> random_inputs(std::size_t n, int dim, std::uint64_t seed) {
  polcnn::Rng rng(seed);
  std::vector<SentenceTensor> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int length = 5 + static_cast<int>(rng.below(40));
    SentenceTensor x(polcnn::kMaxSentenceLength, dim, length);
    for (int r = 0; r < length; ++r) {
      for (auto& v : x.row(r)) v = rng.uniform(-1.0, 1.0);
    }
    out.push_back(std::move(x));
  }
  return out;
}

struct Fixture {
  polcnn::CnnModel model = polcnn::init_model(polcnn::ModelConfig{}, 1);
  std::vector<SentenceTensor> inputs = random_inputs(50, 300, 2);
  std::vector<polcnn::Example> batch;

  Fixture() {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      batch.push_back({&inputs[i], static_cast<int>(i % 7), i});
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_BatchGradientReference(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(polcnn::batch_gradient_reference(f.model, f.batch));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.batch.size()));
}
BENCHMARK(BM_BatchGradientReference)->Unit(benchmark::kMillisecond);

void BM_BatchGradientParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(polcnn::batch_gradient(f.model, f.batch));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.batch.size()));
}
BENCHMARK(BM_BatchGradientParallel)->Unit(benchmark::kMillisecond);

void BM_PredictBatchReference(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(polcnn::predict_batch_reference(f.model, f.inputs));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.inputs.size()));
}
BENCHMARK(BM_PredictBatchReference)->Unit(benchmark::kMillisecond);

void BM_PredictBatchParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(polcnn::predict_batch(f.model, f.inputs));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.inputs.size()));
}
BENCHMARK(BM_PredictBatchParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
