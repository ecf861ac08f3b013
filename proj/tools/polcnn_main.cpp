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

// polcnn command-line entry point.
//
//   polcnn ingest   --format manifesto-csv|briefings --in PATH --out corpus.jsonl
//   polcnn train    --corpus PATH --provider static:PATH|contextual:PATH --seed N --out model.pcnn
//   polcnn evaluate --model PATH --corpus PATH --provider ... [--out report.json]
//   polcnn suite    --specs suite.json --train-corpus PATH --target-corpus PATH --seed N --out DIR
//   polcnn predict  --model PATH --corpus PATH --provider ... --out predictions.jsonl
//
// Exit status: 0 success, 1 internal error, 2 usage or input error.

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "manifest.hpp"
#include "polcnn/corpus.hpp"
#include "polcnn/error.hpp"
#include "polcnn/model_io.hpp"
#include "polcnn/report.hpp"
#include "polcnn/training.hpp"

namespace fs = std::filesystem;
using polcnn::InputError;
using polcnn::cli::RunManifest;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct TrainFlags {
  std::size_t batch_size = 50;
  int max_epochs = 50;
  int patience = 5;
  int filters = 100;
  double dropout = 0.5;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--batch-size", batch_size, "Minibatch size")->capture_default_str();
    cmd.add_option("--max-epochs", max_epochs, "Epoch limit")->capture_default_str();
    cmd.add_option("--patience", patience, "Epochs without validation improvement before stopping")
        ->capture_default_str();
    cmd.add_option("--filters", filters, "Filters per width")->capture_default_str();
    cmd.add_option("--dropout", dropout, "Dropout rate")->capture_default_str();
  }

  polcnn::TrainConfig config(std::uint64_t seed) const {
    polcnn::TrainConfig c;
    c.batch_size = batch_size;
    c.max_epochs = max_epochs;
    c.patience = patience;
    c.seed = seed;
    c.model.filters_per_width = filters;
    c.model.dropout_rate = dropout;
    return c;
  }

  void record(RunManifest& m) const {
    m.flag("batch_size", batch_size);
    m.flag("max_epochs", max_epochs);
    m.flag("patience", patience);
    m.flag("filters", filters);
    m.flag("dropout", dropout);
  }
};

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed) {
  if (!seed) throw InputError("seed required");
  return *seed;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension(suffix);
  return p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw polcnn::Error("failed writing " + path.string());
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void print_counts(const polcnn::Corpus& corpus) {
  std::cout << fmt::format("{} sentences, {} labeled\n", corpus.size(), corpus.labeled_count());
  if (corpus.labeled_count() > 0) {
    std::cout << polcnn::render_distribution(polcnn::label_distribution(corpus));
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Sentence-level political topic classification with convolutional networks"};
  app.require_subcommand(1);
  std::function<void()> run;

  // ingest
  std::string ingest_format;
  fs::path ingest_in, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Convert a manifesto CSV or briefings directory into a corpus file");
  ingest->add_option("--format", ingest_format, "manifesto-csv or briefings")
      ->required()
      ->check(CLI::IsMember({"manifesto-csv", "briefings"}));
  ingest->add_option("--in", ingest_in, "Input CSV file or briefings directory")->required();
  ingest->add_option("--out", ingest_out, "Output corpus (JSON lines)")->required();
  ingest->callback([&] {
    run = [&] {
      RunManifest manifest("ingest", args);
      manifest.flag("format", ingest_format);
      manifest.flag("in", ingest_in.string());
      manifest.flag("out", ingest_out.string());
      polcnn::Corpus corpus;
      if (ingest_format == "manifesto-csv") {
        std::ifstream in(ingest_in, std::ios::binary);
        if (!in) throw InputError("cannot read " + ingest_in.string());
        auto result = polcnn::ingest_manifesto_csv(in, ingest_in.stem().string());
        if (!result.errors.empty()) {
          for (const auto& e : result.errors) {
            std::cerr << fmt::format("{}:{}: {}\n", ingest_in.string(), e.line, e.message);
          }
          throw InputError(fmt::format("{} malformed rows in {}", result.errors.size(),
                                       ingest_in.string()));
        }
        corpus = std::move(result.corpus);
      } else {
        corpus = polcnn::ingest_briefings(ingest_in);
      }
      manifest.input(ingest_in);
      polcnn::save_corpus(ingest_out, corpus);
      manifest.output(ingest_out);
      manifest.write(sibling(ingest_out, ".manifest.json"));
      print_counts(corpus);
    };
  });

  // train
  fs::path train_corpus, train_out;
  std::string train_provider;
  std::optional<std::uint64_t> train_seed;
  TrainFlags train_flags;
  auto* train = app.add_subcommand("train", "Train a classifier on a labeled corpus");
  train->add_option("--corpus", train_corpus, "Labeled corpus (JSON lines)")->required();
  train->add_option("--provider", train_provider, "static:PATH or contextual:PATH")->required();
  train->add_option("--seed", train_seed, "Seed for the split, initialisation, shuffling and dropout");
  train->add_option("--out", train_out, "Output model file")->required();
  train_flags.add_to(*train);
  train->callback([&] {
    run = [&] {
      const auto seed = require_seed(train_seed);
      const auto spec = polcnn::parse_provider_flag(train_provider);
      RunManifest manifest("train", args);
      manifest.flag("corpus", train_corpus.string());
      manifest.flag("provider", train_provider);
      manifest.flag("out", train_out.string());
      train_flags.record(manifest);
      manifest.seed("seed", seed);
      manifest.input(train_corpus);
      manifest.input(spec.source);

      const auto corpus = polcnn::load_corpus(train_corpus);
      const auto provider = polcnn::load_provider(spec.kind, spec.source);
      const auto split = polcnn::split_corpus(corpus, seed);
      std::cout << fmt::format("split: train {}, validation {}, test {}\n", split.train.size(),
                               split.validation.size(), split.test.size());
      const auto result = polcnn::train(split, *provider, train_flags.config(seed));

      const auto history_path = sibling(train_out, ".history.csv");
      const auto manifest_path = sibling(train_out, ".manifest.json");
      polcnn::save_model(result.model, train_out);
      write_file(history_path, polcnn::history_csv(result.history));
      manifest.output(train_out);
      manifest.output(history_path);
      manifest.write(manifest_path);

      std::cout << fmt::format("epochs run {}, best epoch {}\n", result.history.size(),
                               result.best_epoch);
      if (split.test.labeled_count() > 0) {
        const auto report = polcnn::evaluate(result.model, split.test, *provider);
        std::cout << fmt::format("test accuracy {:.2f}%, macro-F1 {:.2f}\n",
                                 100.0 * report.accuracy, 100.0 * report.macro_f1);
      }
    };
  });

  // evaluate
  fs::path eval_model, eval_corpus, eval_out;
  std::string eval_provider;
  auto* evaluate = app.add_subcommand("evaluate", "Score a trained model on a labeled corpus");
  evaluate->add_option("--model", eval_model, "Model file")->required();
  evaluate->add_option("--corpus", eval_corpus, "Labeled corpus (JSON lines)")->required();
  evaluate->add_option("--provider", eval_provider, "static:PATH or contextual:PATH")->required();
  evaluate->add_option("--out", eval_out, "Optional JSON report");
  evaluate->callback([&] {
    run = [&] {
      const auto spec = polcnn::parse_provider_flag(eval_provider);
      const auto model = polcnn::load_model(eval_model);
      const auto corpus = polcnn::load_corpus(eval_corpus);
      const auto provider = polcnn::load_provider(spec.kind, spec.source);
      const auto report = polcnn::transfer_evaluate(model, corpus, *provider);
      std::cout << polcnn::render_eval(report);
      if (!eval_out.empty()) {
        RunManifest manifest("evaluate", args);
        manifest.flag("model", eval_model.string());
        manifest.flag("corpus", eval_corpus.string());
        manifest.flag("provider", eval_provider);
        manifest.flag("out", eval_out.string());
        manifest.input(eval_model);
        manifest.input(eval_corpus);
        manifest.input(spec.source);
        write_file(eval_out, polcnn::eval_to_json(report).dump(2) + "\n");
        manifest.output(eval_out);
        manifest.write(sibling(eval_out, ".manifest.json"));
      }
    };
  });

  // suite
  fs::path suite_specs, suite_train, suite_target, suite_out;
  std::optional<std::uint64_t> suite_seed;
  TrainFlags suite_flags;
  auto* suite = app.add_subcommand("suite", "Run the embedding comparison experiments");
  suite->add_option("--specs", suite_specs, "JSON array of {name, provider_kind, provider_path}")->required();
  suite->add_option("--train-corpus", suite_train, "Labeled source corpus")->required();
  suite->add_option("--target-corpus", suite_target, "Labeled transfer corpus")->required();
  suite->add_option("--seed", suite_seed, "Seed shared by every experiment");
  suite->add_option("--out", suite_out, "Output directory")->required();
  suite_flags.add_to(*suite);
  suite->callback([&] {
    run = [&] {
      const auto seed = require_seed(suite_seed);
      const auto specs = polcnn::load_suite_specs(suite_specs);
      RunManifest manifest("suite", args);
      manifest.flag("specs", suite_specs.string());
      manifest.flag("train_corpus", suite_train.string());
      manifest.flag("target_corpus", suite_target.string());
      manifest.flag("out", suite_out.string());
      suite_flags.record(manifest);
      manifest.seed("seed", seed);
      manifest.input(suite_specs);
      manifest.input(suite_train);
      manifest.input(suite_target);

      const auto source = polcnn::load_corpus(suite_train);
      const auto target = polcnn::load_corpus(suite_target);
      const auto split = polcnn::split_corpus(source, seed);
      auto run_result = polcnn::run_suite(specs, split, target, suite_flags.config(seed));
      run_result.report.metadata["created_utc"] = utc_now();
      for (const auto& spec : specs) manifest.input(spec.source);

      fs::create_directories(suite_out);
      const auto text = polcnn::render_table(run_result.report, polcnn::TableFormat::text);
      write_file(suite_out / "report.txt", text);
      write_file(suite_out / "report.json",
                 polcnn::render_table(run_result.report, polcnn::TableFormat::structured));
      manifest.output(suite_out / "report.txt");
      manifest.output(suite_out / "report.json");
      for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto history = suite_out / (specs[i].name + ".history.csv");
        write_file(history, polcnn::history_csv(run_result.results[i].history));
        manifest.output(history);
      }
      manifest.write(suite_out / "manifest.json");
      std::cout << text;
    };
  });

  // predict
  fs::path pred_model, pred_corpus, pred_out;
  std::string pred_provider;
  auto* predict = app.add_subcommand("predict", "Label every sentence of a corpus with a trained model");
  predict->add_option("--model", pred_model, "Model file")->required();
  predict->add_option("--corpus", pred_corpus, "Corpus (JSON lines)")->required();
  predict->add_option("--provider", pred_provider, "static:PATH or contextual:PATH")->required();
  predict->add_option("--out", pred_out, "Output predictions (JSON lines)")->required();
  predict->callback([&] {
    run = [&] {
      const auto spec = polcnn::parse_provider_flag(pred_provider);
      RunManifest manifest("predict", args);
      manifest.flag("model", pred_model.string());
      manifest.flag("corpus", pred_corpus.string());
      manifest.flag("provider", pred_provider);
      manifest.flag("out", pred_out.string());
      manifest.input(pred_model);
      manifest.input(pred_corpus);
      manifest.input(spec.source);

      const auto model = polcnn::load_model(pred_model);
      const auto corpus = polcnn::load_corpus(pred_corpus);
      const auto provider = polcnn::load_provider(spec.kind, spec.source);
      const auto predictions = polcnn::predict_corpus(model, corpus, *provider);
      std::string out;
      for (std::size_t i = 0; i < predictions.size(); ++i) {
        nlohmann::ordered_json j;
        j["id"] = corpus.sentences()[i].id;
        j["label"] = predictions[i].label + 1;
        j["probs"] = predictions[i].probs;
        out += j.dump() + "\n";
      }
      write_file(pred_out, out);
      manifest.output(pred_out);
      manifest.write(sibling(pred_out, ".manifest.json"));
      std::cout << fmt::format("{} predictions written to {}\n", predictions.size(),
                               pred_out.string());
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    run();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
