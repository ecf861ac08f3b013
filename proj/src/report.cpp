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

#include "polcnn/report.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "polcnn/error.hpp"

namespace polcnn {
namespace {

using ojson = nlohmann::ordered_json;

void check_report(const ComparisonReport& report) {
  if (report.rows.empty()) throw InputError("cannot render an empty comparison report");
  std::set<std::string> names;
  for (const auto& row : report.rows) {
    if (!names.insert(row.experiment).second) {
      throw InputError("duplicate experiment name " + row.experiment);
    }
    for (double v : {row.source_accuracy, row.source_f1, row.target_accuracy, row.target_f1}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InputError(fmt::format("experiment {}: score {} outside [0, 1]", row.experiment, v));
      }
    }
  }
}

std::string metadata_string(const ComparisonReport& report, const char* key,
                            const char* fallback) {
  const auto it = report.metadata.find(key);
  if (it != report.metadata.end() && it->is_string()) return it->get<std::string>();
  return fallback;
}

std::string class_label(std::size_t c, std::size_t classes) {
  if (classes == static_cast<std::size_t>(kNumDomains)) {
    return fmt::format("Domain {} ({})", c + 1, domain_name(static_cast<int>(c + 1)));
  }
  return fmt::format("Class {}", c);
}

}  // namespace

std::string render_table(const ComparisonReport& report, TableFormat format) {
  check_report(report);

  if (format == TableFormat::structured) {
    ojson j;
    j["metadata"] = report.metadata;
    j["rows"] = ojson::array();
    for (const auto& row : report.rows) {
      j["rows"].push_back({{"experiment", row.experiment},
                           {"source", {{"accuracy", row.source_accuracy}, {"f1", row.source_f1}}},
                           {"target", {{"accuracy", row.target_accuracy}, {"f1", row.target_f1}}}});
    }
    return j.dump(2) + "\n";
  }

  std::size_t name_width = std::string_view("Experiment").size();
  for (const auto& row : report.rows) name_width = std::max(name_width, row.experiment.size());

  std::string out;
  auto table = [&](const std::string& title, auto accuracy, auto f1) {
    out += title + "\n";
    out += fmt::format("{:<{}} | {:>8} | {:>6}\n", "Experiment", name_width, "Accuracy", "F1");
    out += fmt::format("{:-<{}}-+-{:-<8}-+-{:-<6}\n", "", name_width, "", "");
    for (const auto& row : report.rows) {
      out += fmt::format("{:<{}} | {:>8} | {:>6}\n", row.experiment, name_width,
                         fmt::format("{:.2f}%", 100.0 * accuracy(row)),
                         fmt::format("{:.2f}", 100.0 * f1(row)));
    }
  };
  table("Source corpus: " + metadata_string(report, "source_corpus", "source"),
        [](const ComparisonRow& r) { return r.source_accuracy; },
        [](const ComparisonRow& r) { return r.source_f1; });
  out += "\n";
  table("Target corpus: " + metadata_string(report, "target_corpus", "target"),
        [](const ComparisonRow& r) { return r.target_accuracy; },
        [](const ComparisonRow& r) { return r.target_f1; });
  return out;
}

ComparisonReport parse_report(std::string_view structured) {
  ojson j;
  try {
    j = ojson::parse(structured);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid report JSON: ") + e.what());
  }
  ComparisonReport report;
  try {
    report.metadata = j.at("metadata");
    for (const auto& row : j.at("rows")) {
      report.rows.push_back({row.at("experiment").get<std::string>(),
                             row.at("source").at("accuracy").get<double>(),
                             row.at("source").at("f1").get<double>(),
                             row.at("target").at("accuracy").get<double>(),
                             row.at("target").at("f1").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string render_distribution(const LabelDistribution& dist) {
  std::size_t width = 0;
  for (int d = 1; d <= kNumDomains; ++d) {
    width = std::max(width, class_label(static_cast<std::size_t>(d - 1), kNumDomains).size());
  }
  std::string out;
  for (std::size_t c = 0; c < dist.size(); ++c) {
    out += fmt::format("{:<{}} | {:>7}\n", class_label(c, kNumDomains), width,
                       fmt::format("{:.2f}%", 100.0 * dist[c]));
  }
  return out;
}

std::string render_eval(const EvalReport& report) {
  const std::size_t k = report.per_class.size();
  std::string out = fmt::format("n = {}\naccuracy = {:.2f}%\nmacro-F1 = {:.2f}\n\n", report.n,
                                100.0 * report.accuracy, 100.0 * report.macro_f1);
  std::size_t width = std::string_view("Class").size();
  for (std::size_t c = 0; c < k; ++c) width = std::max(width, class_label(c, k).size());
  out += fmt::format("{:<{}} | {:>9} | {:>6} | {:>6} | {:>7}\n", "Class", width, "Precision",
                     "Recall", "F1", "Support");
  for (std::size_t c = 0; c < k; ++c) {
    const auto& m = report.per_class[c];
    out += fmt::format("{:<{}} | {:>9.2f} | {:>6.2f} | {:>6.2f} | {:>7}\n", class_label(c, k),
                       width, 100.0 * m.precision, 100.0 * m.recall, 100.0 * m.f1, m.support);
  }
  out += "\nconfusion (rows true, columns predicted)\n";
  for (const auto& row : report.confusion) {
    for (std::size_t p = 0; p < row.size(); ++p) out += fmt::format("{}{:>6}", p ? " " : "", row[p]);
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json eval_to_json(const EvalReport& report) {
  ojson j;
  j["n"] = report.n;
  j["accuracy"] = report.accuracy;
  j["macro_f1"] = report.macro_f1;
  j["per_class"] = ojson::array();
  for (const auto& m : report.per_class) {
    j["per_class"].push_back({{"precision", m.precision},
                              {"recall", m.recall},
                              {"f1", m.f1},
                              {"support", m.support}});
  }
  j["confusion"] = report.confusion;
  return j;
}

}  // namespace polcnn
