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

#include "polcnn/kernels.hpp"

#include "polcnn/error.hpp"
#include "polcnn/parallel.hpp"

namespace polcnn {

void conv_bank_preactivations(const SentenceTensor& x, const ConvBank& bank,
                              std::vector<double>& out) {
  const int d = x.dim();
  const int width = bank.width;
  const std::size_t filters = bank.bias.size();
  if (width < 1 || width > x.rows() ||
      bank.weights.size() != filters * static_cast<std::size_t>(width) * d) {
    throw InputError("convolution bank does not fit the input");
  }
  const auto positions = static_cast<std::size_t>(conv_positions(x.length(), width));
  out.resize(filters * positions);
  const auto values = x.values();
  const std::size_t window = static_cast<std::size_t>(width) * d;
  for (std::size_t f = 0; f < filters; ++f) {
    const double* w = bank.weights.data() + f * window;
    for (std::size_t p = 0; p < positions; ++p) {
      // Rows p..p+width-1 are contiguous, so the window is one flat run.
      const double* in = values.data() + p * d;
      double s = bank.bias[f];
      for (std::size_t q = 0; q < window; ++q) s += in[q] * w[q];
      out[f * positions + p] = s;
    }
  }
}

namespace {

void add_into(Gradients& total, const Gradients& g) {
  auto dst = total.groups();
  const auto src = g.groups();
  for (std::size_t group = 0; group < dst.size(); ++group) {
    for (std::size_t i = 0; i < dst[group].size(); ++i) dst[group][i] += src[group][i];
  }
}

}  // namespace

BatchGradient batch_gradient_reference(const CnnModel& model, std::span<const Example> batch) {
  BatchGradient out{Parameters::zeros(model.config), 0.0};
  for (const auto& ex : batch) {
    const auto cache = forward(model, *ex.input, Mode::train, ex.dropout_seed);
    out.loss_sum += cross_entropy(cache.probs, ex.label);
    add_into(out.grads, backward(model, cache, ex.label));
  }
  return out;
}

BatchGradient batch_gradient(const CnnModel& model, std::span<const Example> batch) {
  const std::size_t n = batch.size();
  std::vector<ForwardCache> caches(n);
  std::vector<BackpropSignals> signals(n);
  std::vector<double> losses(n);
  parallel_for(n, [&](std::size_t e) {
    caches[e] = forward(model, *batch[e].input, Mode::train, batch[e].dropout_seed);
    losses[e] = cross_entropy(caches[e].probs, batch[e].label);
    signals[e] = backprop_signals(model, caches[e], batch[e].label);
  });

  BatchGradient out{Parameters::zeros(model.config), 0.0};
  for (double l : losses) out.loss_sum += l;

  const auto& cfg = model.config;
  const auto features = static_cast<std::size_t>(cfg.feature_count());
  const auto classes = static_cast<long long>(cfg.classes);
  auto& g = out.grads;

#pragma omp parallel for schedule(static)
  for (long long c = 0; c < classes; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    double* w = g.dense_weights.data() + cu * features;
    for (std::size_t e = 0; e < n; ++e) {
      const double dl = signals[e].dlogits[cu];
      g.dense_bias[cu] += dl;
      const auto& feat = caches[e].features;
      for (std::size_t k = 0; k < features; ++k) w[k] += dl * feat[k];
    }
  }

  // Global filter index k -> (bank, filter) in declared order.
  const auto per_bank = static_cast<std::size_t>(cfg.filters_per_width);
  const auto total_filters = static_cast<long long>(features);
  const int d = cfg.dim;
#pragma omp parallel for schedule(dynamic, 4)
  for (long long kk = 0; kk < total_filters; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    auto& bank = g.banks[k / per_bank];
    const std::size_t f = k % per_bank;
    const std::size_t window = static_cast<std::size_t>(bank.width) * d;
    double* w = bank.weights.data() + f * window;
    for (std::size_t e = 0; e < n; ++e) {
      const double dpre = signals[e].dpreact[k];
      bank.bias[f] += dpre;
      if (dpre == 0.0) continue;
      const double* in = caches[e].input.values().data() +
                         static_cast<std::size_t>(caches[e].argmax[k]) * d;
      for (std::size_t q = 0; q < window; ++q) w[q] += dpre * in[q];
    }
  }
  return out;
}

std::vector<Prediction> predict_batch_reference(const CnnModel& model,
                                                std::span<const SentenceTensor> inputs) {
  std::vector<Prediction> out;
  out.reserve(inputs.size());
  for (const auto& x : inputs) out.push_back(predict(model, x));
  return out;
}

std::vector<Prediction> predict_batch(const CnnModel& model,
                                      std::span<const SentenceTensor> inputs) {
  std::vector<Prediction> out(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) { out[i] = predict(model, inputs[i]); });
  return out;
}

}  // namespace polcnn
