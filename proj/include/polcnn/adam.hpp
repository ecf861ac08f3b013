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

#include <cstdint>

#include "polcnn/cnn.hpp"

namespace polcnn {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Parameters m;
  Parameters v;
  std::uint64_t t = 0;

  static AdamState zeros(const ModelConfig& config);
};

// One bias-corrected Adam update of `params` in place. Throws InputError on
// a shape mismatch between params, grads and state.
void adam_step(Parameters& params, const Gradients& grads, AdamState& state,
               const AdamConfig& config = {});

}  // namespace polcnn
