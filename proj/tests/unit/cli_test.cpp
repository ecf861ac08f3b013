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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polcnn/corpus.hpp"
#include "test_util.hpp"

namespace polcnn {
namespace {

using testing::read_file;
using testing::run_command;
using testing::TempDir;
using testing::write_file;

const std::string kCli = POLCNN_CLI_PATH;
const std::filesystem::path kFixtures = POLCNN_FIXTURE_DIR;

std::string quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::vector<std::string> nonempty_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::string train_command(const std::filesystem::path& out, const std::string& extra = "") {
  return kCli + " train --corpus " + quote(kFixtures / "separable/corpus.jsonl") +
         " --provider static:" + quote(kFixtures / "separable/vectors.txt") +
         " --max-epochs 15 --filters 10 --out " + quote(out) + " " + extra;
}

TEST(Cli, IngestManifestoCsv) {
  TempDir dir;
  write_file(dir / "uk.csv", "text,code\nStrong defence,104\nFree speech,201\nLower taxes,402\n");
  const auto r = run_command(kCli + " ingest --format manifesto-csv --in " + quote(dir / "uk.csv") +
                             " --out " + quote(dir / "corpus.jsonl"));
  ASSERT_EQ(r.status, 0) << r.output;
  const auto ls = nonempty_lines(read_file(dir / "corpus.jsonl"));
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(nlohmann::json::parse(ls[2])["label"], 4);
  EXPECT_NE(r.output.find("3 sentences, 3 labeled"), std::string::npos) << r.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "corpus.manifest.json"));
}

TEST(Cli, IngestReportsMalformedRows) {
  TempDir dir;
  write_file(dir / "bad.csv", "text,code\nok,101\nbroken,9x9\n");
  const auto r = run_command(kCli + " ingest --format manifesto-csv --in " + quote(dir / "bad.csv") +
                             " --out " + quote(dir / "c.jsonl"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find(":3:"), std::string::npos) << r.output;
}

TEST(Cli, IngestEmptyBriefingsDirectory) {
  TempDir dir;
  std::filesystem::create_directories(dir / "briefings");
  const auto r = run_command(kCli + " ingest --format briefings --in " + quote(dir / "briefings") +
                             " --out " + quote(dir / "c.jsonl"));
  EXPECT_EQ(r.status, 2) << r.output;
}

TEST(Cli, IngestBriefingFile) {
  TempDir dir;
  std::filesystem::create_directories(dir / "b");
  write_file(dir / "b" / "scotland_2020-04-02.txt", "Stay at home. Protect the NHS.\n");
  const auto r = run_command(kCli + " ingest --format briefings --in " + quote(dir / "b") +
                             " --out " + quote(dir / "c.jsonl"));
  ASSERT_EQ(r.status, 0) << r.output;
  const auto ls = nonempty_lines(read_file(dir / "c.jsonl"));
  ASSERT_EQ(ls.size(), 2u);
  for (const auto& line : ls) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j["label"].is_null());
    EXPECT_EQ(j["source"], "scotland");
    EXPECT_EQ(j["date"], "2020-04-02");
  }
}

TEST(Cli, TrainWritesThreeFilesDeterministically) {
  TempDir dir;
  const auto a = run_command(train_command(dir / "a.pcnn", "--seed 7"));
  ASSERT_EQ(a.status, 0) << a.output;
  for (const char* f : {"a.pcnn", "a.history.csv", "a.manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto b = run_command(train_command(dir / "b.pcnn", "--seed 7"));
  ASSERT_EQ(b.status, 0) << b.output;
  EXPECT_EQ(read_file(dir / "a.pcnn"), read_file(dir / "b.pcnn"));
  EXPECT_EQ(read_file(dir / "a.history.csv"), read_file(dir / "b.history.csv"));

  const auto manifest = nlohmann::json::parse(read_file(dir / "a.manifest.json"));
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["seeds"]["seed"], 7);
  EXPECT_EQ(manifest["inputs"].size(), 2u);
}

TEST(Cli, TrainRequiresSeed) {
  TempDir dir;
  const auto r = run_command(train_command(dir / "m.pcnn"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("seed required"), std::string::npos) << r.output;
  EXPECT_FALSE(std::filesystem::exists(dir / "m.pcnn"));
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_command(kCli).status, 2);
  EXPECT_EQ(run_command(kCli + " train --seed 1").status, 2);
  EXPECT_EQ(run_command(kCli + " frobnicate").status, 2);
}

TEST(Cli, TrainUnembeddableSentenceNamesId) {
  TempDir dir;
  write_file(dir / "c.semb", "SEMB");  // truncated store
  const auto r = run_command(kCli + " train --corpus " + quote(kFixtures / "separable/corpus.jsonl") +
                             " --provider contextual:" + quote(dir / "c.semb") +
                             " --seed 1 --out " + quote(dir / "m.pcnn"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("truncated"), std::string::npos) << r.output;
}

TEST(Cli, PredictAndEvaluate) {
  TempDir dir;
  ASSERT_EQ(run_command(train_command(dir / "m.pcnn", "--seed 3")).status, 0);
  // Five sentences from the bundled corpus.
  const auto corpus_lines = nonempty_lines(read_file(kFixtures / "separable/corpus.jsonl"));
  std::string five;
  for (std::size_t i = 0; i < 5; ++i) five += corpus_lines[i * 13] + "\n";
  write_file(dir / "five.jsonl", five);
  const std::string cmd = kCli + " predict --model " + quote(dir / "m.pcnn") + " --corpus " +
                          quote(dir / "five.jsonl") + " --provider static:" +
                          quote(kFixtures / "separable/vectors.txt") + " --out ";
  const auto r = run_command(cmd + quote(dir / "p1.jsonl"));
  ASSERT_EQ(r.status, 0) << r.output;
  const auto ls = nonempty_lines(read_file(dir / "p1.jsonl"));
  ASSERT_EQ(ls.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto j = nlohmann::json::parse(ls[i]);
    EXPECT_EQ(j["id"], nlohmann::json::parse(corpus_lines[i * 13])["id"]);
    ASSERT_EQ(j["probs"].size(), 7u);
    double sum = 0.0;
    for (const auto& p : j["probs"]) sum += p.get<double>();
    EXPECT_NEAR(sum, 1.0, 1e-9);
    const int label = j["label"];
    EXPECT_GE(label, 1);
    EXPECT_LE(label, 7);
  }
  ASSERT_EQ(run_command(cmd + quote(dir / "p2.jsonl")).status, 0);
  EXPECT_EQ(read_file(dir / "p1.jsonl"), read_file(dir / "p2.jsonl"));

  const auto e = run_command(kCli + " evaluate --model " + quote(dir / "m.pcnn") + " --corpus " +
                             quote(kFixtures / "separable/corpus.jsonl") + " --provider static:" +
                             quote(kFixtures / "separable/vectors.txt"));
  ASSERT_EQ(e.status, 0) << e.output;
  EXPECT_NE(e.output.find("accuracy = "), std::string::npos);
}

TEST(Cli, PredictRejectsCorruptModel) {
  TempDir dir;
  ASSERT_EQ(run_command(train_command(dir / "m.pcnn", "--seed 3")).status, 0);
  auto bytes = read_file(dir / "m.pcnn");
  bytes[100] = static_cast<char>(bytes[100] ^ 0x10);
  write_file(dir / "m.pcnn", bytes);
  const auto r = run_command(kCli + " predict --model " + quote(dir / "m.pcnn") + " --corpus " +
                             quote(kFixtures / "separable/corpus.jsonl") + " --provider static:" +
                             quote(kFixtures / "separable/vectors.txt") + " --out " +
                             quote(dir / "p.jsonl"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("checksum"), std::string::npos) << r.output;
}

std::string suite_command(const std::filesystem::path& specs, const std::filesystem::path& out) {
  return kCli + " suite --specs " + quote(specs) + " --train-corpus " +
         quote(kFixtures / "polysemy/source.jsonl") + " --target-corpus " +
         quote(kFixtures / "polysemy/target.jsonl") +
         " --seed 1 --max-epochs 4 --filters 6 --out " + quote(out);
}

TEST(Cli, SuiteFourExperiments) {
  TempDir dir;
  const auto r = run_command(suite_command(kFixtures / "polysemy/suite.json", dir / "out"));
  ASSERT_EQ(r.status, 0) << r.output;
  const auto report = nlohmann::json::parse(read_file(dir / "out" / "report.json"));
  ASSERT_EQ(report["rows"].size(), 4u);
  EXPECT_EQ(report["rows"][3]["experiment"], "M4");
  EXPECT_TRUE(report["metadata"].contains("created_utc"));
  const auto text = read_file(dir / "out" / "report.txt");
  EXPECT_NE(text.find("Source corpus: "), std::string::npos);
  EXPECT_NE(text.find("Target corpus: target"), std::string::npos);
  EXPECT_EQ(nonempty_lines(text).size(), 2u * (3 + 4));
  for (const char* f : {"manifest.json", "M1.history.csv", "M4.history.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
  }
}

TEST(Cli, SuiteSingleExperiment) {
  TempDir dir;
  write_file(dir / "one.json",
             "[{\"name\":\"M3\",\"provider_kind\":\"contextual\",\"provider_path\":" +
                 nlohmann::json((kFixtures / "polysemy/contextual_a.semb").string()).dump() + "}]");
  const auto r = run_command(suite_command(dir / "one.json", dir / "out"));
  ASSERT_EQ(r.status, 0) << r.output;
  const auto report = nlohmann::json::parse(read_file(dir / "out" / "report.json"));
  EXPECT_EQ(report["rows"].size(), 1u);
}

TEST(Cli, SuiteMissingProviderNamesExperimentAndPath) {
  TempDir dir;
  write_file(dir / "bad.json",
             R"([{"name":"M2","provider_kind":"static","provider_path":"nowhere.txt"}])");
  const auto r = run_command(suite_command(dir / "bad.json", dir / "out"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("M2"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("nowhere.txt"), std::string::npos) << r.output;
}

}  // namespace
}  // namespace polcnn
