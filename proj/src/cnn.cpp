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

#include "polcnn/cnn.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "polcnn/error.hpp"
#include "polcnn/kernels.hpp"
#include "polcnn/rng.hpp"

namespace polcnn {

void ModelConfig::validate() const {
  if (dim < 1) throw InputError(fmt::format("model dim must be positive, got {}", dim));
  if (max_len < 1) throw InputError(fmt::format("max_len must be positive, got {}", max_len));
  if (widths.empty()) throw InputError("model needs at least one filter width");
  for (int w : widths) {
    if (w < 1 || w > max_len) {
      throw InputError(fmt::format("filter width {} outside 1..{}", w, max_len));
    }
  }
  if (filters_per_width < 1) throw InputError("filters_per_width must be at least 1");
  if (classes < 2) throw InputError("classes must be at least 2");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw InputError(fmt::format("dropout rate {} outside [0, 1)", dropout_rate));
  }
}

Parameters Parameters::zeros(const ModelConfig& config) {
  config.validate();
  Parameters p;
  const auto filters = static_cast<std::size_t>(config.filters_per_width);
  for (int w : config.widths) {
    ConvBank bank;
    bank.width = w;
    bank.weights.assign(filters * static_cast<std::size_t>(w) * config.dim, 0.0);
    bank.bias.assign(filters, 0.0);
    p.banks.push_back(std::move(bank));
  }
  p.dense_weights.assign(static_cast<std::size_t>(config.classes) * config.feature_count(), 0.0);
  p.dense_bias.assign(static_cast<std::size_t>(config.classes), 0.0);
  return p;
}

std::vector<std::span<double>> Parameters::groups() {
  std::vector<std::span<double>> out;
  for (auto& bank : banks) {
    out.emplace_back(bank.weights);
    out.emplace_back(bank.bias);
  }
  out.emplace_back(dense_weights);
  out.emplace_back(dense_bias);
  return out;
}

std::vector<std::span<const double>> Parameters::groups() const {
  std::vector<std::span<const double>> out;
  for (const auto& bank : banks) {
    out.emplace_back(bank.weights);
    out.emplace_back(bank.bias);
  }
  out.emplace_back(dense_weights);
  out.emplace_back(dense_bias);
  return out;
}

bool Parameters::same_shape(const Parameters& other) const {
  if (banks.size() != other.banks.size()) return false;
  for (std::size_t b = 0; b < banks.size(); ++b) {
    if (banks[b].width != other.banks[b].width ||
        banks[b].weights.size() != other.banks[b].weights.size() ||
        banks[b].bias.size() != other.banks[b].bias.size()) {
      return false;
    }
  }
  return dense_weights.size() == other.dense_weights.size() &&
         dense_bias.size() == other.dense_bias.size();
}

std::size_t Parameters::size() const {
  std::size_t n = 0;
  for (const auto g : groups()) n += g.size();
  return n;
}

CnnModel init_model(const ModelConfig& config, std::uint64_t seed) {
  CnnModel model{config, Parameters::zeros(config)};
  Rng rng(seed);
  for (auto& bank : model.params.banks) {
    const double fan_in = static_cast<double>(bank.width) * config.dim;
    const double fan_out = config.filters_per_width;
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (auto& w : bank.weights) w = rng.uniform(-bound, bound);
  }
  const double bound = std::sqrt(6.0 / (config.feature_count() + config.classes));
  for (auto& w : model.params.dense_weights) w = rng.uniform(-bound, bound);
  return model;
}

std::vector<double> conv_preactivation(const SentenceTensor& x, std::span<const double> w,
                                       int width, double bias) {
  if (width < 1 || width > x.rows() ||
      w.size() != static_cast<std::size_t>(width) * x.dim()) {
    throw InputError(fmt::format("filter of width {} with {} weights does not fit a {}x{} input",
                                 width, w.size(), x.rows(), x.dim()));
  }
  const int positions = conv_positions(x.length(), width);
  const int d = x.dim();
  std::vector<double> out(static_cast<std::size_t>(positions));
  for (int p = 0; p < positions; ++p) {
    double s = bias;
    for (int i = 0; i < width; ++i) {
      for (int j = 0; j < d; ++j) s += x.at(p + i, j) * w[static_cast<std::size_t>(i * d + j)];
    }
    out[static_cast<std::size_t>(p)] = s;
  }
  return out;
}

std::vector<double> conv_valid(const SentenceTensor& x, std::span<const double> w, int width,
                               double bias) {
  auto out = conv_preactivation(x, w, width, bias);
  for (auto& v : out) v = std::max(v, 0.0);
  return out;
}

PoolResult max_pool_1(std::span<const double> v) {
  if (v.empty()) throw InputError("max pooling over an empty vector");
  PoolResult best{v[0], 0};
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > best.value) best = {v[i], static_cast<int>(i)};
  }
  return best;
}

int argmax(std::span<const double> v) { return max_pool_1(v).index; }

DropoutResult dropout(std::span<const double> v, double rate, Mode mode, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw InputError(fmt::format("dropout rate {} outside [0, 1)", rate));
  }
  DropoutResult out{std::vector<double>(v.begin(), v.end()), std::vector<double>(v.size(), 1.0)};
  if (mode == Mode::eval) return out;
  const double scale = 1.0 / (1.0 - rate);
  Rng rng(seed);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (rng.uniform() < rate) {
      out.mask[i] = 0.0;
      out.values[i] = 0.0;
    } else {
      out.values[i] = v[i] * scale;
    }
  }
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    out[c] = std::exp(logits[c] - top);
    sum += out[c];
  }
  for (auto& p : out) p /= sum;
  return out;
}

ForwardCache forward(const CnnModel& model, const SentenceTensor& x, Mode mode,
                     std::uint64_t seed) {
  const auto& cfg = model.config;
  if (x.dim() != cfg.dim || x.rows() != cfg.max_len) {
    throw InputError(fmt::format("input is {}x{}, model expects {}x{}", x.rows(), x.dim(),
                                 cfg.max_len, cfg.dim));
  }
  ForwardCache cache;
  cache.input = x;
  const auto features = static_cast<std::size_t>(cfg.feature_count());
  cache.preactivations.reserve(features);
  cache.argmax.reserve(features);
  cache.pooled.reserve(features);

  std::vector<double> pre;
  for (const auto& bank : model.params.banks) {
    conv_bank_preactivations(x, bank, pre);
    const auto positions = static_cast<std::size_t>(conv_positions(x.length(), bank.width));
    for (std::size_t f = 0; f < bank.bias.size(); ++f) {
      std::vector<double> row(pre.begin() + static_cast<std::ptrdiff_t>(f * positions),
                              pre.begin() + static_cast<std::ptrdiff_t>((f + 1) * positions));
      std::vector<double> activated(row);
      for (auto& v : activated) v = std::max(v, 0.0);
      const auto pooled = max_pool_1(activated);
      cache.argmax.push_back(pooled.index);
      cache.pooled.push_back(pooled.value);
      cache.preactivations.push_back(std::move(row));
    }
  }

  auto dropped = dropout(cache.pooled, cfg.dropout_rate, mode, seed);
  cache.mask = std::move(dropped.mask);
  cache.features = std::move(dropped.values);
  cache.keep_scale = mode == Mode::train ? 1.0 / (1.0 - cfg.dropout_rate) : 1.0;

  const auto classes = static_cast<std::size_t>(cfg.classes);
  cache.logits.assign(classes, 0.0);
  for (std::size_t c = 0; c < classes; ++c) {
    double s = model.params.dense_bias[c];
    const double* w = model.params.dense_weights.data() + c * features;
    for (std::size_t k = 0; k < features; ++k) s += w[k] * cache.features[k];
    cache.logits[c] = s;
  }
  cache.probs = softmax(cache.logits);
  return cache;
}

double cross_entropy(std::span<const double> probs, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) {
    throw InputError(fmt::format("label {} outside 0..{}", label, probs.size() - 1));
  }
  return -std::log(std::max(probs[static_cast<std::size_t>(label)], 1e-12));
}

BackpropSignals backprop_signals(const CnnModel& model, const ForwardCache& cache, int label) {
  const auto& cfg = model.config;
  const auto features = static_cast<std::size_t>(cfg.feature_count());
  const auto classes = static_cast<std::size_t>(cfg.classes);
  if (cache.probs.size() != classes || cache.features.size() != features ||
      cache.preactivations.size() != features || cache.argmax.size() != features ||
      cache.mask.size() != features || cache.input.dim() != cfg.dim ||
      cache.input.rows() != cfg.max_len) {
    throw InputError("forward cache does not match the model");
  }
  if (label < 0 || static_cast<std::size_t>(label) >= classes) {
    throw InputError(fmt::format("label {} outside 0..{}", label, classes - 1));
  }

  BackpropSignals s;
  s.dlogits = cache.probs;
  s.dlogits[static_cast<std::size_t>(label)] -= 1.0;
  s.dpreact.assign(features, 0.0);
  for (std::size_t k = 0; k < features; ++k) {
    if (cache.mask[k] == 0.0) continue;
    const auto& pre = cache.preactivations[k];
    if (!(pre[static_cast<std::size_t>(cache.argmax[k])] > 0.0)) continue;
    double dfeature = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      dfeature += model.params.dense_weights[c * features + k] * s.dlogits[c];
    }
    s.dpreact[k] = dfeature * cache.keep_scale;
  }
  return s;
}

Gradients backward(const CnnModel& model, const ForwardCache& cache, int label) {
  const auto s = backprop_signals(model, cache, label);
  const auto& cfg = model.config;
  const auto features = static_cast<std::size_t>(cfg.feature_count());
  Gradients g = Parameters::zeros(cfg);

  for (std::size_t c = 0; c < s.dlogits.size(); ++c) {
    g.dense_bias[c] = s.dlogits[c];
    for (std::size_t k = 0; k < features; ++k) {
      g.dense_weights[c * features + k] = s.dlogits[c] * cache.features[k];
    }
  }

  const int d = cfg.dim;
  std::size_t k = 0;
  for (auto& bank : g.banks) {
    const auto width = static_cast<std::size_t>(bank.width);
    for (std::size_t f = 0; f < bank.bias.size(); ++f, ++k) {
      const double dpre = s.dpreact[k];
      bank.bias[f] = dpre;
      const int p = cache.argmax[k];
      double* w = bank.weights.data() + f * width * d;
      for (std::size_t i = 0; i < width; ++i) {
        const auto row = cache.input.row(p + static_cast<int>(i));
        for (int j = 0; j < d; ++j) w[i * d + j] = dpre * row[static_cast<std::size_t>(j)];
      }
    }
  }
  return g;
}

Prediction predict(const CnnModel& model, const SentenceTensor& x) {
  auto cache = forward(model, x, Mode::eval, 0);
  const int label = argmax(cache.probs);
  return {label, std::move(cache.probs)};
}

}  // namespace polcnn
