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
#include <cstdint>
#include <span>
#include <vector>

#include "polcnn/embeddings.hpp"

namespace polcnn {

struct ModelConfig {
  int dim = kDefaultStaticDim;
  int max_len = kMaxSentenceLength;
  std::vector<int> widths = {2, 3, 4};
  int filters_per_width = 100;
  int classes = kNumDomains;
  double dropout_rate = 0.5;

  // Throws InputError when any field is out of range.
  void validate() const;
  int feature_count() const {
    return filters_per_width * static_cast<int>(widths.size());
  }

  bool operator==(const ModelConfig&) const = default;
};

// Filters of one width. weights[(f * width + i) * dim + j] is row i, column j
// of filter f.
struct ConvBank {
  int width = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  bool operator==(const ConvBank&) const = default;
};

// Every trainable tensor of the classifier. Also used for gradients and
// optimizer moments, which share the shapes.
struct Parameters {
  std::vector<ConvBank> banks;
  std::vector<double> dense_weights;  // classes x feature_count, row-major
  std::vector<double> dense_bias;     // classes

  static Parameters zeros(const ModelConfig& config);

  // Flat views in the fixed declared order: for each bank weights then bias,
  // then dense weights, then dense bias.
  std::vector<std::span<double>> groups();
  std::vector<std::span<const double>> groups() const;

  bool same_shape(const Parameters& other) const;
  std::size_t size() const;

  bool operator==(const Parameters&) const = default;
};

using Gradients = Parameters;

struct CnnModel {
  ModelConfig config;
  Parameters params;

  bool operator==(const CnnModel&) const = default;
};

enum class Mode { train, eval };

// Glorot-uniform weights (conv fan_in = width * dim, fan_out = filters;
// dense fan_in = features, fan_out = classes), zero biases.
CnnModel init_model(const ModelConfig& config, std::uint64_t seed);

// Number of convolution positions over a sentence of `length` rows.
inline int conv_positions(int length, int width) {
  return length >= width ? length - width + 1 : 1;
}

// b + sum_{i<h, j<d} x[p+i][j] * w[i][j] for every position p.
std::vector<double> conv_preactivation(const SentenceTensor& x, std::span<const double> w,
                                       int width, double bias);
// ReLU of conv_preactivation.
std::vector<double> conv_valid(const SentenceTensor& x, std::span<const double> w,
                               int width, double bias);

struct PoolResult {
  double value;
  int index;
};

// Maximum and lowest index attaining it. Throws InputError on empty input.
PoolResult max_pool_1(std::span<const double> v);

struct DropoutResult {
  std::vector<double> values;
  std::vector<double> mask;  // 1 kept, 0 dropped
};

// Inverted dropout: kept entries are scaled by 1/(1-p) in train mode; eval
// mode is the identity with an all-ones mask.
DropoutResult dropout(std::span<const double> v, double rate, Mode mode, std::uint64_t seed);

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

struct ForwardCache {
  SentenceTensor input;
  std::vector<std::vector<double>> preactivations;  // one row per filter, banks in order
  std::vector<int> argmax;
  std::vector<double> pooled;
  std::vector<double> mask;
  double keep_scale = 1.0;
  std::vector<double> features;  // pooled after dropout
  std::vector<double> logits;
  std::vector<double> probs;
};

// Throws InputError when x.dim() or x.rows() disagree with the model.
ForwardCache forward(const CnnModel& model, const SentenceTensor& x, Mode mode,
                     std::uint64_t seed);

// -ln(max(probs[label], 1e-12)). Throws InputError for a label outside probs.
double cross_entropy(std::span<const double> probs, int label);

// Derivatives of the loss with respect to the quantities the parameter
// gradients are assembled from.
struct BackpropSignals {
  std::vector<double> dlogits;    // probs - onehot
  std::vector<double> dpreact;    // per filter, at its argmax position (0 when gated)
};

BackpropSignals backprop_signals(const CnnModel& model, const ForwardCache& cache, int label);

// Exact gradient of cross_entropy(forward(...)). Throws InputError when the
// cache does not match the model.
Gradients backward(const CnnModel& model, const ForwardCache& cache, int label);

struct Prediction {
  int label;  // class index, ties to the lowest
  std::vector<double> probs;
};

Prediction predict(const CnnModel& model, const SentenceTensor& x);

// Index of the largest entry, ties to the lowest index.
int argmax(std::span<const double> v);

}  // namespace polcnn
