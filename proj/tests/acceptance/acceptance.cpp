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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "common/oracles.hpp"
#include "polcnn/adam.hpp"
#include "polcnn/error.hpp"
#include "polcnn/model_io.hpp"
#include "polcnn/synthetic.hpp"
#include "polcnn/training.hpp"
#include "unit/test_util.hpp"

namespace {

using namespace polcnn;
using testing::read_file;
using testing::run_command;
using testing::TempDir;

const std::filesystem::path kFixtures = POLCNN_FIXTURE_DIR;
const std::string kCli = POLCNN_CLI_PATH;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

Outcome gradient_check() {
  const auto start = std::chrono::steady_clock::now();
  ModelConfig config;
  config.dim = 5;
  config.max_len = 8;
  config.widths = {2, 3, 4};
  config.filters_per_width = 2;
  config.classes = 7;
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Rng rng(seed);
    const auto model = oracle::random_model(config, rng);
    const auto x = testing::random_tensor(rng, 8, 5, 1 + static_cast<int>(rng.below(8)));
    const int label = static_cast<int>(rng.below(7));
    const auto dropout_seed = rng.next();
    const auto cache = forward(model, x, Mode::train, dropout_seed);
    const auto check =
        oracle::check_gradients(model, x, label, dropout_seed, backward(model, cache, label));
    worst = std::max(worst, check.max_rel_error);
    checked += check.checked;
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-4 && elapsed < 10.0,
          fmt::format("8 seeds, {} parameters, max relative error {:.2e}, {:.2f} s", checked, worst,
                      elapsed)};
}

Outcome overfit_sanity() {
  const auto start = std::chrono::steady_clock::now();
  const auto corpus = load_corpus(kFixtures / "separable/corpus.jsonl");
  const auto provider = load_provider(ProviderKind::static_table, kFixtures / "separable/vectors.txt");
  SplitResult all;
  all.train = corpus;
  all.validation = Corpus("validation", "", {});
  all.test = Corpus("test", "", {});
  TrainConfig config;
  config.seed = 1;
  config.max_epochs = 200;
  const auto result = train(all, *provider, config);
  const double accuracy = evaluate(result.model, corpus, *provider).accuracy;
  const double elapsed = seconds_since(start);
  return {corpus.size() == 70 && provider->dim() == 16 && accuracy == 1.0 && elapsed < 60.0,
          fmt::format("{} sentences, d = {}, train accuracy {:.4f} after {} epochs, {:.2f} s",
                      corpus.size(), provider->dim(), accuracy, result.history.size(), elapsed)};
}

Outcome cli_determinism() {
  TempDir dir;
  auto run = [&](const std::string& name) {
    return run_command(kCli + " train --corpus " + quote(kFixtures / "separable/corpus.jsonl") +
                       " --provider static:" + quote(kFixtures / "separable/vectors.txt") +
                       " --seed 42 --out " + quote(dir / (name + ".pcnn")));
  };
  const auto a = run("a");
  const auto b = run("b");
  if (a.status != 0 || b.status != 0) return {false, "train exited with " + std::to_string(a.status)};
  const auto ma = read_file(dir / "a.pcnn"), mb = read_file(dir / "b.pcnn");
  const auto ha = read_file(dir / "a.history.csv"), hb = read_file(dir / "b.history.csv");
  return {!ma.empty() && ma == mb && ha == hb,
          fmt::format("model {} bytes {}, history {} bytes {}", ma.size(),
                      ma == mb ? "identical" : "differ", ha.size(), ha == hb ? "identical" : "differ")};
}

Outcome split_contract() {
  const std::vector<std::size_t> sizes = {100, 44, 106, 255, 318, 112, 65};
  std::vector<LabeledSentence> sentences;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      LabeledSentence s;
      s.id = fmt::format("s{}-{}", c, i);
      s.text = "x";
      s.tokens = {"x"};
      s.label = static_cast<int>(c + 1);
      sentences.push_back(std::move(s));
    }
  }
  const Corpus corpus("thousand", "", std::move(sentences));
  const auto split = split_corpus(corpus, 2024);
  std::set<std::string> seen;
  std::size_t total = 0;
  bool disjoint = true, stratified = true;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    std::array<double, 7> counts{};
    for (const auto& s : part->sentences()) {
      disjoint &= seen.insert(s.id).second;
      ++counts[static_cast<std::size_t>(*s.label - 1)];
      ++total;
    }
    const double share = part == &split.train ? 0.70 : 0.15;
    for (std::size_t c = 0; c < 7; ++c) {
      stratified &= std::abs(counts[c] - share * static_cast<double>(sizes[c])) <= 1.0;
    }
  }
  const bool exhaustive = total == 1000 && seen.size() == 1000;
  return {split.test.size() == 150 && split.validation.size() == 150 && split.train.size() == 700 &&
              disjoint && exhaustive && stratified,
          fmt::format("train {}, validation {}, test {}, disjoint {}, exhaustive {}, per-class within 1: {}",
                      split.train.size(), split.validation.size(), split.test.size(), disjoint,
                      exhaustive, stratified)};
}

// Two-class model on one-dimensional inputs: predicts class 1 exactly when the
// single token value exceeds 0.5.
Outcome metric_oracle() {
  ModelConfig config;
  config.dim = 1;
  config.widths = {1};
  config.filters_per_width = 1;
  config.classes = 2;
  CnnModel model{config, Parameters::zeros(config)};
  model.params.banks[0].weights = {1.0};
  model.params.dense_weights = {0.0, 1.0};
  model.params.dense_bias = {0.0, -0.5};

  ContextualStore store(1, "");
  std::vector<LabeledSentence> sentences;
  auto add = [&](int label, float value, int count) {
    for (int i = 0; i < count; ++i) {
      LabeledSentence s;
      s.id = fmt::format("c{}-{}-{}", label, value, i);
      s.text = "x";
      s.tokens = {"x"};
      s.label = label;
      store.add({s.id, 1, {value}});
      sentences.push_back(std::move(s));
    }
  };
  add(1, 0.1f, 8);
  add(1, 0.9f, 2);
  add(2, 0.1f, 3);
  add(2, 0.9f, 7);
  const Corpus corpus("confusion", "", sentences);
  const ContextualProvider provider(std::move(store), "crafted");
  const auto r = evaluate(model, corpus, provider);
  const bool confusion_ok = r.confusion == std::vector<std::vector<std::size_t>>{{8, 2}, {3, 7}};
  const auto hand = oracle::hand_metrics(r.confusion);
  const bool values_ok = std::abs(r.accuracy - 0.75) <= 1e-4 && std::abs(r.macro_f1 - 0.7494) <= 1e-4 &&
                         std::abs(r.macro_f1 - hand.macro_f1) <= 1e-12;

  std::vector<int> truth;
  for (int i = 0; i < 70; ++i) truth.push_back(i % 7);
  const auto perfect = score_predictions(truth, truth, 7);
  const bool perfect_ok = perfect.accuracy == 1.0 && perfect.macro_f1 == 1.0;
  return {confusion_ok && values_ok && perfect_ok,
          fmt::format("accuracy {:.4f}, macro-F1 {:.4f}; perfect accuracy {}, macro-F1 {}", r.accuracy,
                      r.macro_f1, perfect.accuracy, perfect.macro_f1)};
}

Outcome softmax_identities() {
  const std::vector<double> uniform(7, 1.0 / 7.0);
  const double uniform_loss = cross_entropy(uniform, 3);
  double worst_sum = 0.0, worst_shift = 0.0;
  Rng rng(6);
  ModelConfig config;
  config.dim = 8;
  config.max_len = 20;
  config.filters_per_width = 4;
  for (int trial = 0; trial < 500; ++trial) {
    const auto model = oracle::random_model(config, rng, 1.5);
    const auto x = testing::random_tensor(rng, 20, 8, 1 + static_cast<int>(rng.below(20)));
    const auto cache = forward(model, x, trial % 2 ? Mode::train : Mode::eval, rng.next());
    double sum = 0.0;
    for (double p : cache.probs) sum += p;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    auto shifted = cache.logits;
    const double c = rng.uniform(-100, 100);
    for (auto& z : shifted) z += c;
    const auto q = softmax(shifted);
    for (std::size_t k = 0; k < q.size(); ++k) worst_shift = std::max(worst_shift, std::abs(q[k] - cache.probs[k]));
  }
  const bool ok = std::abs(uniform_loss - std::log(7.0)) <= 1e-9 && worst_sum <= 1e-9 && worst_shift <= 1e-9;
  return {ok, fmt::format("uniform loss {:.10f}, max |sum - 1| {:.1e}, max shift deviation {:.1e}",
                          uniform_loss, worst_sum, worst_shift)};
}

Outcome adam_closed_form() {
  ModelConfig config;
  config.dim = 1;
  config.max_len = 1;
  config.widths = {1};
  config.filters_per_width = 1;
  config.classes = 2;
  auto params = Parameters::zeros(config);
  auto grads = Parameters::zeros(config);
  grads.dense_bias[0] = 0.5;
  auto state = AdamState::zeros(config);
  adam_step(params, grads, state);
  const double delta = params.dense_bias[0];
  const double closed = -0.001 * 0.5 / (0.5 + 1e-8);
  const bool ok = std::abs(delta - closed) <= 1e-12 && std::abs(delta - -9.99999980e-4) <= 1e-12 &&
                  params.dense_bias[1] == 0.0;
  return {ok, fmt::format("delta {:.12e}, closed form {:.12e}", delta, closed)};
}

struct SuiteOutcome {
  SuiteRun run;
  std::vector<ExperimentSpec> specs;
  SplitResult split;
  Corpus target;
};

SuiteOutcome run_polysemy_suite() {
  SuiteOutcome out;
  out.specs = load_suite_specs(kFixtures / "polysemy/suite.json");
  out.split = split_corpus(load_corpus(kFixtures / "polysemy/source.jsonl"), 1);
  out.target = load_corpus(kFixtures / "polysemy/target.jsonl");
  TrainConfig config;
  config.seed = 1;
  out.run = run_suite(out.specs, out.split, out.target, config);
  return out;
}

Outcome suite_structure(const SuiteOutcome& s) {
  const auto& rows = s.run.report.rows;
  const auto text = render_table(s.run.report, TableFormat::text);
  const auto parsed = parse_report(render_table(s.run.report, TableFormat::structured));
  std::size_t headers = 0;
  for (std::size_t at = text.find("Experiment | Accuracy |     F1"); at != std::string::npos;
       at = text.find("Experiment | Accuracy |     F1", at + 1)) {
    ++headers;
  }
  const bool shape = rows.size() == 4 && headers == 2 && text.find("Source corpus: ") == 0 &&
                     text.find("Target corpus: ") != std::string::npos && parsed == s.run.report;
  bool unchanged = true;
  for (std::size_t i = 0; i < s.specs.size(); ++i) {
    const auto& model = s.run.results[i].model;
    const auto provider = load_provider(s.specs[i].kind, s.specs[i].source);
    const auto before = serialize_model(model);
    const auto report = transfer_evaluate(model, s.target, *provider);
    unchanged &= serialize_model(model) == before;
    unchanged &= report.accuracy == rows[i].target_accuracy && report.macro_f1 == rows[i].target_f1;
  }
  return {shape && unchanged,
          fmt::format("{} rows, {} tables with Experiment/Accuracy/F1, model bytes unchanged by transfer: {}",
                      rows.size(), headers, unchanged)};
}

Outcome embedding_sensitivity(const SuiteOutcome& s) {
  double best_static = 0.0, worst_contextual = 1.0;
  std::string detail;
  for (std::size_t i = 0; i < s.specs.size(); ++i) {
    const double acc = s.run.report.rows[i].source_accuracy;
    detail += fmt::format("{}{} {:.2f}%", i ? ", " : "", s.specs[i].name, 100.0 * acc);
    if (s.specs[i].kind == ProviderKind::contextual) {
      worst_contextual = std::min(worst_contextual, acc);
    } else {
      best_static = std::max(best_static, acc);
    }
  }
  const double gap = worst_contextual - best_static;
  return {gap >= 0.10, fmt::format("{}; smallest gap {:.2f} pp", detail, 100.0 * gap)};
}

Outcome format_round_trips() {
  const auto semb = read_file(kFixtures / "polysemy/contextual_a.semb");
  std::istringstream in(semb);
  const auto store = read_semb(in);
  std::ostringstream out;
  write_semb(out, store);
  const bool semb_ok = out.str() == semb;

  TempDir dir;
  Rng rng(10);
  const auto model = oracle::random_model(ModelConfig{}, rng);
  save_model(model, dir / "m.pcnn");
  const auto loaded = load_model(dir / "m.pcnn");
  const bool model_ok = loaded == model && serialize_model(loaded) == serialize_model(model);

  auto bytes = serialize_model(model);
  bytes[bytes.size() / 2] ^= 0x40;
  bool rejected = false;
  try {
    deserialize_model(bytes);
  } catch (const InputError& e) {
    rejected = std::string(e.what()).find("checksum") != std::string::npos;
  }
  return {semb_ok && model_ok && rejected,
          fmt::format("SEMB {} bytes identical: {}; model {} parameters identical: {}; corrupted file rejected: {}",
                      semb.size(), semb_ok, model.params.size(), model_ok, rejected)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("AC%-2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "gradient correctness", gradient_check);
  report(2, "overfit sanity", overfit_sanity);
  report(3, "train determinism", cli_determinism);
  report(4, "split contract", split_contract);
  report(5, "metric oracle", metric_oracle);
  report(6, "softmax and loss identities", softmax_identities);
  report(7, "Adam first step", adam_closed_form);

  std::optional<SuiteOutcome> suite;
  std::string suite_error;
  try {
    suite = run_polysemy_suite();
  } catch (const std::exception& e) {
    suite_error = e.what();
  }
  auto with_suite = [&](Outcome (*fn)(const SuiteOutcome&)) {
    return [&, fn] {
      if (!suite) return Outcome{false, "suite failed: " + suite_error};
      return fn(*suite);
    };
  };
  report(8, "suite structure", with_suite(suite_structure));
  report(9, "embedding sensitivity", with_suite(embedding_sensitivity));
  report(10, "format round trips", format_round_trips);

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
