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

#include "polcnn/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polcnn/csv.hpp"
#include "polcnn/error.hpp"
#include "polcnn/parallel.hpp"
#include "polcnn/rng.hpp"

namespace polcnn {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

// Whether the word ending at text[dot] (inclusive) is a listed abbreviation.
bool ends_with_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  while (begin < dot && is_opener(text[begin])) ++begin;
  std::string word(text.substr(begin, dot - begin + 1));
  std::transform(word.begin(), word.end(), word.begin(), ascii_lower);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

const std::regex& briefing_filename_pattern() {
  static const std::regex pattern(R"(^(.+)_([0-9]{4})-([0-9]{2})-([0-9]{2})\.txt$)");
  return pattern;
}

const std::regex& manifesto_code_pattern() {
  static const std::regex pattern(R"(^[0-9]{3}(\.[0-9]+)?$)");
  return pattern;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw InputError("cannot read file " + path.string());
  return buffer.str();
}

std::string lowercase_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

}  // namespace

std::string_view domain_name(int domain) {
  static constexpr std::array<std::string_view, kNumDomains> kNames = {
      "External Relations",
      "Freedom and Democracy",
      "Political System",
      "Economy",
      "Welfare and Economy of Life",
      "Fabric of Society",
      "Social groups"};
  if (domain < 1 || domain > kNumDomains) {
    throw InputError("domain out of range: " + std::to_string(domain));
  }
  return kNames[static_cast<std::size_t>(domain - 1)];
}

Corpus::Corpus(std::string name, std::string provenance,
               std::vector<LabeledSentence> sentences)
    : name_(std::move(name)),
      provenance_(std::move(provenance)),
      sentences_(std::move(sentences)) {
  index_.reserve(sentences_.size());
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    const auto& s = sentences_[i];
    if (s.label && (*s.label < 1 || *s.label > kNumDomains)) {
      throw InputError("sentence " + s.id + ": label " +
                       std::to_string(*s.label) + " outside 1..7");
    }
    if (!index_.emplace(s.id, i).second) {
      throw InputError("duplicate sentence id " + s.id);
    }
  }
}

std::size_t Corpus::labeled_count() const {
  return static_cast<std::size_t>(
      std::count_if(sentences_.begin(), sentences_.end(),
                    [](const LabeledSentence& s) { return s.label.has_value(); }));
}

const LabeledSentence* Corpus::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &sentences_[it->second];
}

std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> out;
  auto emit = [&out](std::string_view piece) {
    piece = trim(piece);
    if (!piece.empty()) out.emplace_back(piece);
  };

  const std::size_t n = text.size();
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < n && is_terminator(text[end])) ++end;
    const bool single_period = text[i] == '.' && end == i + 1;
    while (end < n && is_closer(text[end])) ++end;

    std::size_t next = end;
    while (next < n && is_space(text[next])) ++next;
    std::size_t first = next;
    while (first < n && is_opener(text[first])) ++first;

    const bool boundary =
        next > end && first < n &&
        (std::isupper(static_cast<unsigned char>(text[first])) ||
         std::isdigit(static_cast<unsigned char>(text[first])));
    if (boundary && !(single_period && ends_with_abbreviation(text, i))) {
      emit(text.substr(start, end - start));
      start = end;
    }
    i = end;
  }
  emit(text.substr(start));
  return out;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = sentence.size();
  while (i < n) {
    while (i < n && is_space(sentence[i])) ++i;
    std::size_t j = i;
    while (j < n && !is_space(sentence[j])) ++j;
    if (j == i) break;

    const std::string chunk = lowercase_ascii(sentence.substr(i, j - i));
    std::size_t a = 0;
    while (a < chunk.size() && is_ascii_punct(chunk[a])) ++a;
    if (a == chunk.size()) {
      for (char c : chunk) tokens.emplace_back(1, c);
    } else {
      std::size_t b = chunk.size();
      while (b > a && is_ascii_punct(chunk[b - 1])) --b;
      for (std::size_t k = 0; k < a; ++k) tokens.emplace_back(1, chunk[k]);
      tokens.push_back(chunk.substr(a, b - a));
      for (std::size_t k = b; k < chunk.size(); ++k) tokens.emplace_back(1, chunk[k]);
    }
    i = j;
  }
  return tokens;
}

ManifestoIngest ingest_manifesto_csv(std::istream& in, std::string_view source) {
  CsvReader reader(in);
  auto header = reader.next();
  if (!header) throw InputError("manifesto CSV is empty; expected header text,code");

  std::optional<std::size_t> text_col;
  std::optional<std::size_t> code_col;
  for (std::size_t c = 0; c < header->fields.size(); ++c) {
    std::string name = lowercase_ascii(trim(header->fields[c]));
    if (c == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
    if (name == "text") text_col = c;
    if (name == "code") code_col = c;
  }
  if (!text_col || !code_col) {
    throw InputError("line 1: header must contain columns text and code");
  }
  const std::size_t columns = header->fields.size();

  ManifestoIngest result;
  std::vector<LabeledSentence> sentences;
  std::size_t ordinal = 0;
  while (auto record = reader.next()) {
    ++ordinal;
    auto fail = [&](std::string message) {
      result.errors.push_back({record->line, std::move(message)});
    };
    if (record->fields.size() != columns) {
      fail("expected " + std::to_string(columns) + " fields, found " +
           std::to_string(record->fields.size()));
      continue;
    }
    const std::string_view text = trim(record->fields[*text_col]);
    const std::string_view code = trim(record->fields[*code_col]);
    if (text.empty()) {
      fail("empty text field");
      continue;
    }

    std::optional<int> label;
    if (code == "000" || code == "H" || code == "h") {
      label = std::nullopt;
    } else if (std::regex_match(code.begin(), code.end(), manifesto_code_pattern())) {
      const int domain = code.front() - '0';
      if (domain < 1 || domain > kNumDomains) {
        fail("code " + std::string(code) + " has no domain 1-7");
        continue;
      }
      label = domain;
    } else {
      fail("unparsable code '" + std::string(code) + "'");
      continue;
    }

    LabeledSentence s;
    s.id = std::string(source) + "#" + std::to_string(ordinal);
    s.text = std::string(text);
    s.tokens = tokenize(s.text);
    s.label = label;
    s.source = std::string(source);
    sentences.push_back(std::move(s));
  }
  result.corpus = Corpus(std::string(source), "manifesto CSV export",
                         std::move(sentences));
  return result;
}

Corpus ingest_briefings(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw InputError("briefings path is not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  if (files.empty()) throw InputError("no briefing files in " + dir.string());
  std::sort(files.begin(), files.end());

  struct Meta {
    std::string stem;
    std::string source;
    std::string date;
  };
  std::vector<Meta> meta;
  for (const auto& path : files) {
    const std::string filename = path.filename().string();
    std::smatch m;
    if (!std::regex_match(filename, m, briefing_filename_pattern())) {
      throw InputError("briefing filename does not match <source>_<YYYY-MM-DD>.txt: " +
                       path.string());
    }
    const std::chrono::year_month_day ymd{
        std::chrono::year{std::stoi(m[2].str())},
        std::chrono::month{static_cast<unsigned>(std::stoi(m[3].str()))},
        std::chrono::day{static_cast<unsigned>(std::stoi(m[4].str()))}};
    if (!ymd.ok()) throw InputError("invalid date in briefing filename: " + path.string());
    meta.push_back({path.stem().string(), m[1].str(),
                    m[2].str() + "-" + m[3].str() + "-" + m[4].str()});
  }

  std::vector<std::vector<LabeledSentence>> per_file(files.size());
  parallel_for(files.size(), [&](std::size_t f) {
    const std::string content = read_file(files[f]);
    const auto sentences = segment_sentences(content);
    auto& out = per_file[f];
    out.reserve(sentences.size());
    for (std::size_t k = 0; k < sentences.size(); ++k) {
      LabeledSentence s;
      s.id = meta[f].stem + "#" + std::to_string(k + 1);
      s.text = sentences[k];
      s.tokens = tokenize(s.text);
      s.source = meta[f].source;
      s.date = meta[f].date;
      out.push_back(std::move(s));
    }
  });

  std::vector<LabeledSentence> all;
  for (auto& part : per_file) {
    std::move(part.begin(), part.end(), std::back_inserter(all));
  }
  return Corpus(dir.filename().string(), "press briefings directory " + dir.string(),
                std::move(all));
}

namespace {

// Min-cost flow by successive shortest paths (Bellman-Ford), sized for the
// handful of nodes a class-by-part rounding problem needs.
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t nodes) : adj_(nodes) {}

  std::size_t add_edge(std::size_t from, std::size_t to, long long cap, long long cost) {
    adj_[from].push_back(edges_.size());
    edges_.push_back({to, cap, cost});
    adj_[to].push_back(edges_.size());
    edges_.push_back({from, 0, -cost});
    return edges_.size() - 2;
  }

  long long flow_on(std::size_t edge) const { return edges_[edge ^ 1].cap; }

  long long run(std::size_t source, std::size_t sink) {
    constexpr long long kInf = std::numeric_limits<long long>::max();
    long long total = 0;
    for (;;) {
      std::vector<long long> dist(adj_.size(), kInf);
      std::vector<std::size_t> via(adj_.size(), SIZE_MAX);
      dist[source] = 0;
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t u = 0; u < adj_.size(); ++u) {
          if (dist[u] == kInf) continue;
          for (std::size_t e : adj_[u]) {
            const auto& edge = edges_[e];
            if (edge.cap > 0 && dist[u] + edge.cost < dist[edge.to]) {
              dist[edge.to] = dist[u] + edge.cost;
              via[edge.to] = e;
              changed = true;
            }
          }
        }
      }
      if (dist[sink] == kInf) return total;
      long long push = kInf;
      for (std::size_t v = sink; v != source; v = edges_[via[v] ^ 1].to) {
        push = std::min(push, edges_[via[v]].cap);
      }
      for (std::size_t v = sink; v != source; v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].cap -= push;
        edges_[via[v] ^ 1].cap += push;
      }
      total += push;
    }
  }

 private:
  struct Edge {
    std::size_t to;
    long long cap;
    long long cost;
  };
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace

std::vector<std::vector<std::size_t>> allocate_stratified(
    const std::vector<std::size_t>& class_sizes, const std::vector<std::size_t>& percents) {
  const std::size_t k = class_sizes.size();
  const std::size_t parts = percents.size();
  if (parts == 0 || std::accumulate(percents.begin(), percents.end(), std::size_t{0}) != 100) {
    throw InputError("split percentages must sum to 100");
  }
  const std::size_t total = std::accumulate(class_sizes.begin(), class_sizes.end(),
                                            std::size_t{0});

  // Part totals: round-half-up for every part but the first, which takes the rest.
  std::vector<std::size_t> part_total(parts);
  std::size_t assigned = 0;
  for (std::size_t j = 1; j < parts; ++j) {
    part_total[j] = (2 * percents[j] * total + 100) / 200;
    assigned += part_total[j];
  }
  part_total[0] = total - assigned;

  // Held-out parts (j >= 1) take their quota rounded down or up; part 0 gets
  // whatever is left of each class. base[c] is part 0's count when every
  // held-out cell rounds down.
  std::vector<std::vector<std::size_t>> alloc(k, std::vector<std::size_t>(parts));
  std::vector<std::size_t> base(k);
  std::vector<std::size_t> part_left = part_total;
  for (std::size_t c = 0; c < k; ++c) {
    base[c] = class_sizes[c];
    for (std::size_t j = 1; j < parts; ++j) {
      alloc[c][j] = percents[j] * class_sizes[c] / 100;
      base[c] -= alloc[c][j];
      part_left[j] -= alloc[c][j];
    }
  }

  // Min-cost flow over round-up units: source -> class -> held-out part ->
  // sink. Costs are changes in total absolute rounding error (hundredths of
  // an item). Rounding held-out cell (c, j) up moves its error from r to
  // 100 - r; the u-th unit taken from class c moves part 0's error along a
  // convex curve, so parallel unit edges with rising costs model it exactly.
  const std::size_t source = 0, sink = 1 + k + parts;
  MinCostFlow flow(sink + 1);
  auto train_error = [&](std::size_t c, std::size_t u) {
    return std::llabs(100 * (static_cast<long long>(base[c]) - static_cast<long long>(u)) -
                      static_cast<long long>(percents[0] * class_sizes[c]));
  };
  // Leaving part 0 more than one item from its quota costs kOff extra.
  constexpr long long kOff = 1'000'000;
  auto unit_cost = [&](std::size_t c, std::size_t u) {
    const long long e = train_error(c, u);
    return e + (e > 100 ? kOff : 0);
  };
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t u = 1; u < parts && u <= base[c]; ++u) {
      flow.add_edge(source, 1 + c, 1, unit_cost(c, u) - unit_cost(c, u - 1));
    }
  }
  std::vector<std::vector<std::size_t>> cell_edge(k, std::vector<std::size_t>(parts));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 1; j < parts; ++j) {
      const auto r = static_cast<long long>((percents[j] * class_sizes[c]) % 100);
      cell_edge[c][j] = flow.add_edge(1 + c, 1 + k + j, 1, 100 - 2 * r);
    }
  }
  std::size_t needed = 0;
  for (std::size_t j = 1; j < parts; ++j) {
    flow.add_edge(1 + k + j, sink, static_cast<long long>(part_left[j]), 0);
    needed += part_left[j];
  }
  if (flow.run(source, sink) != static_cast<long long>(needed)) {
    throw Error("stratified allocation is infeasible");
  }
  for (std::size_t c = 0; c < k; ++c) {
    alloc[c][0] = class_sizes[c];
    for (std::size_t j = 1; j < parts; ++j) {
      alloc[c][j] += static_cast<std::size_t>(flow.flow_on(cell_edge[c][j]));
      alloc[c][0] -= alloc[c][j];
    }
  }
  return alloc;
}

SplitResult split_corpus(const Corpus& corpus, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kNumDomains> members;
  const auto& sentences = corpus.sentences();
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (sentences[i].label) {
      members[static_cast<std::size_t>(*sentences[i].label - 1)].push_back(i);
    }
  }
  std::vector<std::size_t> sizes(kNumDomains);
  for (std::size_t c = 0; c < kNumDomains; ++c) sizes[c] = members[c].size();
  if (std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == 0) {
    throw InputError("cannot split corpus " + corpus.name() + ": no labeled sentences");
  }

  const auto counts = allocate_stratified(sizes, {70, 15, 15});

  enum Part : std::uint8_t { kNone, kTrain, kValidation, kTest };
  std::vector<Part> assignment(sentences.size(), kNone);
  Rng rng(mix_seed(seed, 0));
  for (std::size_t c = 0; c < kNumDomains; ++c) {
    auto order = members[c];
    shuffle(order, rng);
    for (std::size_t r = 0; r < order.size(); ++r) {
      const auto test = counts[c][2], validation = counts[c][1];
      assignment[order[r]] = r < test ? kTest : r < test + validation ? kValidation : kTrain;
    }
  }

  std::vector<LabeledSentence> train, validation, test;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    switch (assignment[i]) {
      case kTrain: train.push_back(sentences[i]); break;
      case kValidation: validation.push_back(sentences[i]); break;
      case kTest: test.push_back(sentences[i]); break;
      case kNone: break;
    }
  }
  const std::string policy = "stratified 70/15/15, seed " + std::to_string(seed);
  SplitResult result;
  result.train = Corpus(corpus.name() + "/train", policy, std::move(train));
  result.validation = Corpus(corpus.name() + "/validation", policy, std::move(validation));
  result.test = Corpus(corpus.name() + "/test", policy, std::move(test));
  result.seed = seed;
  return result;
}

LabelDistribution label_distribution(const Corpus& corpus) {
  std::array<std::size_t, kNumDomains> counts{};
  std::size_t labeled = 0;
  for (const auto& s : corpus.sentences()) {
    if (s.label) {
      ++counts[static_cast<std::size_t>(*s.label - 1)];
      ++labeled;
    }
  }
  if (labeled == 0) {
    throw InputError("corpus " + corpus.name() + " has no labeled sentences");
  }
  LabelDistribution dist{};
  for (std::size_t c = 0; c < kNumDomains; ++c) {
    dist[c] = static_cast<double>(counts[c]) / static_cast<double>(labeled);
  }
  return dist;
}

void write_corpus_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.sentences()) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["text"] = s.text;
    j["label"] = s.label ? nlohmann::ordered_json(*s.label) : nlohmann::ordered_json(nullptr);
    j["source"] = s.source;
    j["date"] = s.date ? nlohmann::ordered_json(*s.date) : nlohmann::ordered_json(nullptr);
    out << j.dump() << '\n';
  }
}

Corpus read_corpus_jsonl(std::istream& in, std::string name) {
  std::vector<LabeledSentence> sentences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(where + "invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("text") || !j["text"].is_string()) {
      throw InputError(where + "record needs string fields id and text");
    }
    LabeledSentence s;
    s.id = j["id"].get<std::string>();
    s.text = j["text"].get<std::string>();
    s.tokens = tokenize(s.text);
    if (j.contains("label") && !j["label"].is_null()) {
      if (!j["label"].is_number_integer()) throw InputError(where + "label must be an integer or null");
      s.label = j["label"].get<int>();
    }
    if (j.contains("source") && j["source"].is_string()) s.source = j["source"].get<std::string>();
    if (j.contains("date") && !j["date"].is_null()) {
      if (!j["date"].is_string()) throw InputError(where + "date must be a string or null");
      s.date = j["date"].get<std::string>();
    }
    sentences.push_back(std::move(s));
  }
  return Corpus(std::move(name), "canonical JSON-lines corpus", std::move(sentences));
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus " + path.string());
  return read_corpus_jsonl(in, path.stem().string());
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write corpus " + path.string());
  write_corpus_jsonl(out, corpus);
  if (!out) throw Error("failed writing corpus " + path.string());
}

}  // namespace polcnn
