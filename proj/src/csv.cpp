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

#include "polcnn/csv.hpp"

#include <istream>

#include "polcnn/error.hpp"

namespace polcnn {

std::optional<CsvRecord> CsvReader::next() {
  while (true) {
    if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;

    CsvRecord record;
    record.line = line_;
    std::string field;
    bool quoted = false;
    bool in_quotes = false;
    bool ended = false;

    while (!ended) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) {
        if (in_quotes) {
          throw InputError("line " + std::to_string(record.line) +
                           ": unterminated quoted field");
        }
        ended = true;
        break;
      }
      const char ch = static_cast<char>(c);
      if (in_quotes) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            in_quotes = false;
          }
        } else {
          if (ch == '\n') ++line_;
          field.push_back(ch);
        }
        continue;
      }
      switch (ch) {
        case '"':
          if (field.empty() && !quoted) {
            quoted = in_quotes = true;
          } else {
            field.push_back(ch);
          }
          break;
        case ',':
          record.fields.push_back(std::move(field));
          field.clear();
          quoted = false;
          break;
        case '\r':
          if (in_.peek() == '\n') break;
          field.push_back(ch);
          break;
        case '\n':
          ++line_;
          ended = true;
          break;
        default:
          field.push_back(ch);
      }
    }
    record.fields.push_back(std::move(field));

    // Blank lines carry no record.
    if (record.fields.size() == 1 && record.fields[0].empty() && !quoted) {
      continue;
    }
    return record;
  }
}

}  // namespace polcnn
