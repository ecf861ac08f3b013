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

// Minibatch kernels. Each has a serial reference built directly from the
// single-example operations in cnn.hpp and an OpenMP version. The parallel
// versions reduce in a fixed example order, so both produce identical bits
// for any thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "polcnn/cnn.hpp"

namespace polcnn {

struct Example {
  const SentenceTensor* input;
  int label;  // class index
  std::uint64_t dropout_seed;
};

struct BatchGradient {
  Gradients grads;  // summed over the batch, not averaged
  double loss_sum = 0.0;
};

// Pre-activations of every filter of `bank` at every position,
// out[f * positions + p].
void conv_bank_preactivations(const SentenceTensor& x, const ConvBank& bank,
                              std::vector<double>& out);

// Sum over examples of backward(forward(x, train)), in example order.
BatchGradient batch_gradient_reference(const CnnModel& model, std::span<const Example> batch);

// Same result; forward passes run in parallel and the per-filter weight
// reduction is parallel over filters.
BatchGradient batch_gradient(const CnnModel& model, std::span<const Example> batch);

std::vector<Prediction> predict_batch_reference(const CnnModel& model,
                                                std::span<const SentenceTensor> inputs);
std::vector<Prediction> predict_batch(const CnnModel& model,
                                      std::span<const SentenceTensor> inputs);

}  // namespace polcnn
