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

#include "polcnn/training.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "polcnn/error.hpp"
#include "polcnn/kernels.hpp"
#include "polcnn/model_io.hpp"
#include "polcnn/parallel.hpp"
#include "polcnn/rng.hpp"

namespace polcnn {
namespace {

// Seed streams derived from TrainConfig::seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kDropoutStream = 3;

struct EmbeddedSet {
  std::vector<SentenceTensor> inputs;
  std::vector<int> labels;  // class index
};

EmbeddedSet embed_labeled(const Corpus& corpus, const EmbeddingProvider& provider,
                          int classes) {
  std::vector<const LabeledSentence*> labeled;
  for (const auto& s : corpus.sentences()) {
    if (s.label) labeled.push_back(&s);
  }
  EmbeddedSet out;
  out.inputs.resize(labeled.size());
  out.labels.resize(labeled.size());
  parallel_for(labeled.size(), [&](std::size_t i) {
    const auto& s = *labeled[i];
    if (*s.label > classes) {
      throw InputError(fmt::format("sentence {}: label {} exceeds the model's {} classes", s.id,
                                   *s.label, classes));
    }
    try {
      out.inputs[i] = provider.embed(s);
    } catch (const Error& e) {
      throw InputError(fmt::format("cannot embed sentence {}: {}", s.id, e.what()));
    }
    out.labels[i] = *s.label - 1;
  });
  return out;
}

bool all_finite(const Parameters& params) {
  for (const auto group : params.groups()) {
    for (double v : group) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) throw InputError("batch_size must be at least 1");
  if (max_epochs < 1) throw InputError("max_epochs must be at least 1");
  if (patience < 1) throw InputError("patience must be at least 1");
}

TrainResult train(const SplitResult& split, const EmbeddingProvider& provider,
                  const TrainConfig& config) {
  config.validate();
  ModelConfig model_config = config.model;
  model_config.dim = provider.dim();
  model_config.validate();

  const auto train_set = embed_labeled(split.train, provider, model_config.classes);
  if (train_set.inputs.empty()) throw InputError("training set has no labeled sentences");
  const auto val_set = embed_labeled(split.validation, provider, model_config.classes);
  const bool has_validation = !val_set.inputs.empty();

  TrainResult result;
  CnnModel model = init_model(model_config, mix_seed(config.seed, kInitStream));
  AdamState adam = AdamState::zeros(model_config);
  Parameters best = model.params;
  double best_f1 = -1.0;
  int stale_epochs = 0;

  const std::size_t n = train_set.inputs.size();
  std::vector<std::size_t> order(n);
  std::vector<Example> batch;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffler(mix_seed(mix_seed(config.seed, kShuffleStream), static_cast<std::uint64_t>(epoch)));
    shuffle(order, shuffler);
    const std::uint64_t dropout_base =
        mix_seed(mix_seed(config.seed, kDropoutStream), static_cast<std::uint64_t>(epoch));

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      batch.clear();
      for (std::size_t pos = start; pos < end; ++pos) {
        const std::size_t i = order[pos];
        batch.push_back({&train_set.inputs[i], train_set.labels[i], mix_seed(dropout_base, pos)});
      }
      auto step = batch_gradient(model, batch);
      loss_sum += step.loss_sum;
      const double inv = 1.0 / static_cast<double>(batch.size());
      for (auto group : step.grads.groups()) {
        for (auto& g : group) g *= inv;
      }
      adam_step(model.params, step.grads, adam, config.adam);
    }
    if (!all_finite(model.params)) {
      throw Error(fmt::format("training diverged: non-finite parameters after epoch {}", epoch));
    }

    EpochRecord record{epoch, loss_sum / static_cast<double>(n),
                       std::numeric_limits<double>::quiet_NaN()};
    if (has_validation) {
      const auto preds = predict_batch(model, val_set.inputs);
      std::vector<int> predicted(preds.size());
      for (std::size_t i = 0; i < preds.size(); ++i) predicted[i] = preds[i].label;
      record.val_macro_f1 =
          score_predictions(val_set.labels, predicted, model_config.classes).macro_f1;
    }
    result.history.push_back(record);

    if (!has_validation) {
      best = model.params;
      result.best_epoch = epoch;
      continue;
    }
    if (record.val_macro_f1 > best_f1) {
      best_f1 = record.val_macro_f1;
      best = model.params;
      result.best_epoch = epoch;
      stale_epochs = 0;
    } else if (++stale_epochs >= config.patience) {
      break;
    }
  }
  result.model = CnnModel{model_config, std::move(best)};
  return result;
}

EvalReport evaluate(const CnnModel& model, const Corpus& corpus,
                    const EmbeddingProvider& provider) {
  if (corpus.labeled_count() == 0) {
    throw InputError("corpus " + corpus.name() + " has no labeled sentences to evaluate");
  }
  if (provider.dim() != model.config.dim) {
    throw InputError(fmt::format("provider dim {} does not match model dim {}", provider.dim(),
                                 model.config.dim));
  }
  const auto set = embed_labeled(corpus, provider, model.config.classes);
  const auto preds = predict_batch(model, set.inputs);
  std::vector<int> predicted(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) predicted[i] = preds[i].label;
  return score_predictions(set.labels, predicted, model.config.classes);
}

EvalReport transfer_evaluate(const CnnModel& model, const Corpus& target,
                             const EmbeddingProvider& provider) {
  const auto before = serialize_model(model);
  auto report = evaluate(model, target, provider);
  if (serialize_model(model) != before) {
    throw Error("transfer evaluation modified the model parameters");
  }
  return report;
}

std::vector<Prediction> predict_corpus(const CnnModel& model, const Corpus& corpus,
                                       const EmbeddingProvider& provider) {
  if (provider.dim() != model.config.dim) {
    throw InputError(fmt::format("provider dim {} does not match model dim {}", provider.dim(),
                                 model.config.dim));
  }
  const auto& sentences = corpus.sentences();
  std::vector<SentenceTensor> inputs(sentences.size());
  parallel_for(sentences.size(), [&](std::size_t i) {
    try {
      inputs[i] = provider.embed(sentences[i]);
    } catch (const Error& e) {
      throw InputError(fmt::format("cannot embed sentence {}: {}", sentences[i].id, e.what()));
    }
  });
  return predict_batch(model, inputs);
}

std::string history_csv(std::span<const EpochRecord> history) {
  std::string out = "epoch,train_loss,val_macro_f1\n";
  for (const auto& r : history) {
    out += fmt::format("{},{:.17g},{:.17g}\n", r.epoch, r.train_loss, r.val_macro_f1);
  }
  return out;
}

std::unique_ptr<EmbeddingProvider> load_provider(ProviderKind kind,
                                                 const std::filesystem::path& source) {
  if (kind == ProviderKind::static_table) {
    return std::make_unique<StaticProvider>(load_static_vectors(source),
                                            "static:" + source.string());
  }
  auto store = load_contextual_store(source);
  std::string description = "contextual:" + source.string();
  if (!store.meta().empty()) description += " (" + store.meta() + ")";
  return std::make_unique<ContextualProvider>(std::move(store), std::move(description));
}

ExperimentSpec parse_provider_flag(std::string_view flag) {
  const auto colon = flag.find(':');
  if (colon == std::string_view::npos || colon + 1 == flag.size()) {
    throw InputError("provider must be static:<path> or contextual:<path>, got '" +
                     std::string(flag) + "'");
  }
  const auto kind = flag.substr(0, colon);
  ExperimentSpec spec;
  spec.name = std::string(flag);
  spec.source = std::string(flag.substr(colon + 1));
  if (kind == "static") {
    spec.kind = ProviderKind::static_table;
  } else if (kind == "contextual") {
    spec.kind = ProviderKind::contextual;
  } else {
    throw InputError("unknown provider kind '" + std::string(kind) + "'");
  }
  return spec;
}

std::vector<ExperimentSpec> load_suite_specs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read suite specs " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
  if (!j.is_array() || j.empty()) {
    throw InputError(path.string() + ": expected a non-empty array of experiments");
  }
  std::vector<ExperimentSpec> specs;
  std::set<std::string> names;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const auto where = fmt::format("{}: experiment {}", path.string(), i);
    if (!e.is_object() || !e.contains("name") || !e["name"].is_string() ||
        !e.contains("provider_kind") || !e["provider_kind"].is_string() ||
        !e.contains("provider_path") || !e["provider_path"].is_string()) {
      throw InputError(where + " needs string fields name, provider_kind, provider_path");
    }
    ExperimentSpec spec;
    spec.name = e["name"].get<std::string>();
    const auto kind = e["provider_kind"].get<std::string>();
    if (kind == "static") {
      spec.kind = ProviderKind::static_table;
    } else if (kind == "contextual") {
      spec.kind = ProviderKind::contextual;
    } else {
      throw InputError(where + ": unknown provider_kind '" + kind + "'");
    }
    spec.source = e["provider_path"].get<std::string>();
    if (spec.source.is_relative()) spec.source = path.parent_path() / spec.source;
    if (!names.insert(spec.name).second) {
      throw InputError(where + ": duplicate experiment name " + spec.name);
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

SuiteRun run_suite(std::span<const ExperimentSpec> specs, const SplitResult& split,
                   const Corpus& target, const TrainConfig& config) {
  if (specs.empty()) throw InputError("experiment suite is empty");
  std::set<std::string> names;
  for (const auto& spec : specs) {
    if (!names.insert(spec.name).second) {
      throw InputError("duplicate experiment name " + spec.name);
    }
  }

  SuiteRun run;
  auto& meta = run.report.metadata;
  meta["seed"] = config.seed;
  meta["split_policy"] = "stratified by domain; 70% train, 15% validation, 15% test";
  meta["source_corpus"] = split.test.name();
  meta["target_corpus"] = target.name();
  meta["f1"] = "macro-F1, unweighted over all classes";
  meta["scale"] = "structured scores are fractions in [0,1]; text tables print percentages";
  meta["train"] = {{"batch_size", config.batch_size},
                   {"max_epochs", config.max_epochs},
                   {"patience", config.patience},
                   {"filters_per_width", config.model.filters_per_width},
                   {"widths", config.model.widths},
                   {"dropout_rate", config.model.dropout_rate},
                   {"learning_rate", config.adam.learning_rate}};
  meta["providers"] = nlohmann::ordered_json::object();

  for (const auto& spec : specs) {
    try {
      const auto provider = load_provider(spec.kind, spec.source);
      auto trained = train(split, *provider, config);
      const auto source = evaluate(trained.model, split.test, *provider);
      const auto transfer = transfer_evaluate(trained.model, target, *provider);
      run.report.rows.push_back({spec.name, source.accuracy, source.macro_f1, transfer.accuracy,
                                 transfer.macro_f1});
      meta["providers"][spec.name] = provider->describe();
      run.results.push_back(std::move(trained));
    } catch (const InputError& e) {
      throw InputError("experiment " + spec.name + ": " + e.what());
    } catch (const Error& e) {
      throw Error("experiment " + spec.name + ": " + e.what());
    }
  }
  return run;
}

}  // namespace polcnn
