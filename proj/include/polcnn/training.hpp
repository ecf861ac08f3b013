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
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "polcnn/adam.hpp"
#include "polcnn/cnn.hpp"
#include "polcnn/corpus.hpp"
#include "polcnn/embeddings.hpp"
#include "polcnn/metrics.hpp"
#include "polcnn/report.hpp"

namespace polcnn {

struct TrainConfig {
  std::size_t batch_size = 50;
  int max_epochs = 50;
  int patience = 5;  // epochs without validation macro-F1 improvement
  std::uint64_t seed = 0;
  ModelConfig model;  // dim is taken from the provider
  AdamConfig adam;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_macro_f1 = 0.0;  // NaN when there is no validation set

  bool operator==(const EpochRecord&) const = default;
};

struct TrainResult {
  CnnModel model;  // parameters from the best validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

// Minibatch Adam training with a per-epoch shuffle seeded by (seed, epoch),
// early stopping on validation macro-F1, and best-epoch model selection.
// Without a validation set every epoch runs and the last one is kept.
// Throws InputError naming the sentence when the provider cannot embed it.
TrainResult train(const SplitResult& split, const EmbeddingProvider& provider,
                  const TrainConfig& config);

// Scores predict() on every labeled sentence. Throws InputError when the
// corpus has none.
EvalReport evaluate(const CnnModel& model, const Corpus& corpus,
                    const EmbeddingProvider& provider);

// evaluate() on a corpus the model was not trained on; verifies that the
// model bytes are unchanged afterwards.
EvalReport transfer_evaluate(const CnnModel& model, const Corpus& target,
                             const EmbeddingProvider& provider);

// predict() on every sentence, labeled or not, in corpus order.
std::vector<Prediction> predict_corpus(const CnnModel& model, const Corpus& corpus,
                                       const EmbeddingProvider& provider);

// "epoch,train_loss,val_macro_f1" CSV.
std::string history_csv(std::span<const EpochRecord> history);

enum class ProviderKind { static_table, contextual };

struct ExperimentSpec {
  std::string name;
  ProviderKind kind = ProviderKind::static_table;
  std::filesystem::path source;
};

std::unique_ptr<EmbeddingProvider> load_provider(ProviderKind kind,
                                                 const std::filesystem::path& source);

// Parses "static:<path>" or "contextual:<path>".
ExperimentSpec parse_provider_flag(std::string_view flag);

// Reads a JSON array of {name, provider_kind, provider_path}; relative
// provider paths resolve against the spec file's directory.
std::vector<ExperimentSpec> load_suite_specs(const std::filesystem::path& path);

struct SuiteRun {
  ComparisonReport report;
  std::vector<TrainResult> results;  // in spec order
};

// Trains and scores every experiment on the same split and target corpus.
// Any failure aborts the suite with an Error naming the experiment.
SuiteRun run_suite(std::span<const ExperimentSpec> specs, const SplitResult& split,
                   const Corpus& target, const TrainConfig& config);

}  // namespace polcnn
