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

#include "polcnn/adam.hpp"

#include <cmath>

#include "polcnn/error.hpp"

namespace polcnn {

AdamState AdamState::zeros(const ModelConfig& config) {
  return {Parameters::zeros(config), Parameters::zeros(config), 0};
}

void adam_step(Parameters& params, const Gradients& grads, AdamState& state,
               const AdamConfig& config) {
  if (!params.same_shape(grads) || !params.same_shape(state.m) ||
      !params.same_shape(state.v)) {
    throw InputError("adam_step: parameter, gradient and moment shapes differ");
  }
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);

  auto theta = params.groups();
  const auto g = grads.groups();
  auto m = state.m.groups();
  auto v = state.v.groups();
  for (std::size_t group = 0; group < theta.size(); ++group) {
    for (std::size_t i = 0; i < theta[group].size(); ++i) {
      const double gi = g[group][i];
      m[group][i] = config.beta1 * m[group][i] + (1.0 - config.beta1) * gi;
      v[group][i] = config.beta2 * v[group][i] + (1.0 - config.beta2) * gi * gi;
      const double m_hat = m[group][i] / correction1;
      const double v_hat = v[group][i] / correction2;
      theta[group][i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

}  // namespace polcnn
